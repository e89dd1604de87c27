"""Deep argument analysis toolkit.

A multi-angular record model for comprehensive argument analyses, a
synthetic corpus generator, a validity and scheme-instantiation checker
for the monadic formalization language, the systematic/exegetic metric
suite, and a generative-chain engine over pluggable text-to-text backends.
"""

from deepa2.argdown import (
    ArgdownArgument,
    InferenceStep,
    final_conclusion_of,
    parse_argdown,
    premises_of,
    render_argdown,
)
from deepa2.backends import (
    GenerationRequest,
    HttpBackend,
    ModelBackend,
    NoisyOracleBackend,
    OracleBackend,
    format_prompt,
    make_backend,
)
from deepa2.chains import (
    ChainResult,
    ChainSpec,
    chain_by_id,
    chain_by_name,
    chain_catalog,
    export_training,
    formalization_subchain,
    pool,
    run_chain,
    sophistication,
)
from deepa2.dimensions import DimensionId
from deepa2.evaluation import aggregate_table, evaluate_traces, oracle_reports
from deepa2.formula import (
    check_entailment,
    check_satisfiable,
    parse_formula,
    render_formula,
)
from deepa2.generator import (
    GeneratorConfig,
    generate_corpus,
    sample_argument,
    subset_census,
    verbalize_argument,
)
from deepa2.importers import (
    EntailmentTreeRecord,
    HoeFeatures,
    RuleTakerRecord,
    apply_label_classifier,
    extract_hoe_features,
    fit_label_classifier,
    import_entailmentbank,
    import_ruletaker,
)
from deepa2.metrics import (
    MetricReport,
    default_scorer,
    evaluate_analysis,
)
from deepa2.modes import ModeSpec, full_mode_catalog, mode, mode_registry
from deepa2.records import (
    DeepA2Record,
    QuotedStatement,
    RecordMeta,
    classify_subsets,
    dump_corpus,
    load_corpus,
    parse_dimension,
    serialize_dimension,
)
from deepa2.schemes import SchemeCatalog, builtin_catalog, check_scheme_instantiation, sys_sch_ratio

__version__ = "0.1.0"
