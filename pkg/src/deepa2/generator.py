"""Synthetic corpus generation.

Records are built in three stages.  ``sample_argument`` chains scheme
variants from the catalog into a valid argument tree: each step's
conclusion unifies with a premise slot of its successor, remaining slots
become leaf premises, and the whole tree is asserted deductively valid.
``verbalize_argument`` assigns lexicon phrases to predicate letters and
renders every statement through the template bank, yielding the argument
block and its premise/conclusion/formalization side products.
``compose_source`` then presents the argument as a story: it orders the
retained statements, drops the planned implicit ones, inserts provably
irrelevant distractor sentences, prefixes a limited number of indicator
words, and records the verbatim reason/conjecture quotes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from deepa2.argdown import ArgdownArgument, InferenceStep
from deepa2.errors import ConfigError, GenerationError
from deepa2.formula import (
    And,
    Formula,
    Not,
    Or,
    check_entailment,
    check_satisfiable,
    render_formula,
)
from deepa2.formula.syntax import parse_formula
from deepa2.lexicon import DomainLexicon, builtin_lexicon
from deepa2.metrics import default_scorer, evaluate_analysis, work_dict_of_record
from deepa2.nl_templates import render_statement, shape_of, templates_for
from deepa2.records import (
    DeepA2Record,
    QuotedStatement,
    RecordMeta,
    record_from_dict,
    record_to_dict,
)
from deepa2.schemes import (
    SchemeCatalog,
    SchemeVariant,
    _Binding,
    builtin_catalog,
    instantiate_pattern,
    match_pattern,
    patterns_unify,
)
from deepa2.textnorm import tokenize

MAX_PREDICATE_LETTERS = 8
_LETTER_POOL = "FGHIJKLMNOPQRST"  # E left out, it marks existential prefixes
_CONST_POOL = "abcd"

_PREMISE_INDICATORS = ("Plus,", "Moreover,", "And", "In addition,", "Besides,")
_CONCLUSION_INDICATORS = ("Therefore,", "So,", "Consequently,", "Hence,")
_INDICATOR_BUDGET = 3

# First words of bank templates; these lose their capital after an
# indicator word, proper names never do.
_DECAPITALIZABLE = {
    "If", "Every", "Whoever", "No", "Nobody", "Everyone", "Everybody",
    "Each", "It", "Assuming", "Being",
}

QUOTE_SCORE_BOUND = 0.8


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for one corpus flavor; distributions must be proper."""

    lexicon_id: str = "places_people"
    step_weights: tuple[float, ...] = (0.40, 0.20, 0.15, 0.25)
    p_intricate: float = 0.45
    implicit_premise_weights: tuple[float, ...] = (0.50, 0.25, 0.25)
    p_implicit_intermediate: float = 0.35
    p_final_explicit: float = 0.70
    distractor_weights: tuple[float, ...] = (0.40, 0.25, 0.35)
    imprecise_rendition: bool = False
    paraphrase: str | None = None
    seed: int = 0

    def __post_init__(self):
        for name in ("step_weights", "implicit_premise_weights", "distractor_weights"):
            weights = getattr(self, name)
            if not weights or any(w < 0 for w in weights) or sum(weights) <= 0:
                raise ConfigError(f"{name} must be a proper distribution")
        for name in ("p_intricate", "p_implicit_intermediate", "p_final_explicit"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "lexicon_id": self.lexicon_id,
            "step_weights": list(self.step_weights),
            "p_intricate": self.p_intricate,
            "implicit_premise_weights": list(self.implicit_premise_weights),
            "p_implicit_intermediate": self.p_implicit_intermediate,
            "p_final_explicit": self.p_final_explicit,
            "distractor_weights": list(self.distractor_weights),
            "imprecise_rendition": self.imprecise_rendition,
            "paraphrase": self.paraphrase,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorConfig":
        kwargs = dict(data)
        for name in ("step_weights", "implicit_premise_weights", "distractor_weights"):
            if name in kwargs:
                kwargs[name] = tuple(kwargs[name])
        try:
            return cls(**kwargs)
        except TypeError as err:
            raise ConfigError(f"bad generator config: {err}") from None

    @classmethod
    def preset(cls, name: str) -> "GeneratorConfig":
        if name == "aaac01":
            return cls()
        if name == "aaac02":
            return cls(lexicon_id="sports_clubs", imprecise_rendition=True)
        raise ConfigError(f"unknown preset {name!r} (have: aaac01, aaac02)")


# Paraphrase hooks rewrite the finished source text; an external backend
# can register here.  Quote verbatim-ness is the hook's responsibility.
_PARAPHRASE_HOOKS: dict[str, Callable[[str], str]] = {}


def register_paraphrase_hook(name: str, hook: Callable[[str], str]) -> None:
    _PARAPHRASE_HOOKS[name] = hook


# ---------------------------------------------------------------------------
# Argument sampling
# ---------------------------------------------------------------------------


@dataclass
class TreeStatement:
    number: int
    formula: Formula
    role: str  # "premise" | "intermediate" | "final"
    text: str = ""


@dataclass
class StepInstance:
    variant: SchemeVariant
    from_numbers: tuple[int, ...]
    derives: int


@dataclass
class ArgumentTree:
    statements: list[TreeStatement]
    steps: list[StepInstance]
    letters: list[str]
    constants: list[str]

    def statement(self, number: int) -> TreeStatement:
        return self.statements[number - 1]

    @property
    def premises(self) -> list[TreeStatement]:
        return [s for s in self.statements if s.role == "premise"]

    @property
    def final(self) -> TreeStatement:
        return self.statements[-1]


class _DeadEnd(Exception):
    pass


def _pattern_letters(pattern: Formula) -> tuple[tuple[str, ...], tuple[str, ...]]:
    shape = shape_of(pattern)
    return shape.pred_letters, shape.const_letters


def _is_plain(variant: SchemeVariant) -> bool:
    """Plain variants avoid negation and compositional consequents."""
    if variant.intricate:
        return False
    return not any(
        _contains_complexity(p) for p in variant.premises
    ) and not _contains_complexity(variant.conclusion)


class _Sampler:
    def __init__(self, catalog: SchemeCatalog):
        self.variants = catalog.all_variants()
        self.plain_pool = [v for v in self.variants if _is_plain(v)]
        self.productive = {
            v.label
            for v in self.variants
            if any(
                patterns_unify(v.conclusion, w.premises[slot])
                for w in self.variants
                for slot in range(len(w.premises))
            )
        }

    def pool(self, intricate_flavor: bool) -> list[SchemeVariant]:
        return self.variants if intricate_flavor else self.plain_pool


_samplers: dict[int, _Sampler] = {}


def _sampler_for(catalog: SchemeCatalog) -> _Sampler:
    key = id(catalog)
    if key not in _samplers:
        _samplers[key] = _Sampler(catalog)
    return _samplers[key]


class _LetterAllocator:
    def __init__(self):
        self.letters: list[str] = []
        self.constants: list[str] = []

    def next_letter(self) -> str:
        if len(self.letters) >= len(_LETTER_POOL):
            raise _DeadEnd
        letter = _LETTER_POOL[len(self.letters)]
        self.letters.append(letter)
        return letter

    def next_constant(self) -> str:
        if len(self.constants) >= len(_CONST_POOL):
            raise _DeadEnd
        const = _CONST_POOL[len(self.constants)]
        self.constants.append(const)
        return const


def _instantiate_step(
    variant: SchemeVariant,
    consumed: tuple[int, Formula] | None,
    alloc: _LetterAllocator,
) -> tuple[list[Formula], Formula]:
    binding = _Binding()
    if consumed is not None:
        slot, formula = consumed
        if not match_pattern(variant.premises[slot], formula, binding):
            raise _DeadEnd
    for pattern in list(variant.premises) + [variant.conclusion]:
        preds, consts = _pattern_letters(pattern)
        for letter in preds:
            if letter not in binding.preds:
                binding.preds[letter] = alloc.next_letter()
        for const in consts:
            if const not in binding.consts:
                binding.consts[const] = alloc.next_constant()
    premises = [instantiate_pattern(p, binding) for p in variant.premises]
    conclusion = instantiate_pattern(variant.conclusion, binding)
    return premises, conclusion


def _new_letters_needed(
    variant: SchemeVariant, consumed: tuple[int, Formula] | None
) -> int:
    binding = _Binding()
    if consumed is not None:
        slot, formula = consumed
        if not match_pattern(variant.premises[slot], formula, binding):
            return 1 << 30
    letters = set(binding.preds)
    total = 0
    for pattern in list(variant.premises) + [variant.conclusion]:
        for letter in _pattern_letters(pattern)[0]:
            if letter not in letters:
                letters.add(letter)
                total += 1
    return total


def _try_sample_tree(
    config: GeneratorConfig, rng: random.Random, catalog: SchemeCatalog
) -> ArgumentTree:
    sampler = _sampler_for(catalog)
    n_steps = rng.choices(range(1, len(config.step_weights) + 1),
                          weights=config.step_weights)[0]
    intricate_flavor = rng.random() < config.p_intricate
    pool = sampler.pool(intricate_flavor)

    alloc = _LetterAllocator()
    statements: list[TreeStatement] = []
    steps: list[StepInstance] = []

    def add_statement(formula: Formula, role: str) -> int:
        statements.append(TreeStatement(len(statements) + 1, formula, role))
        return statements[-1].number

    prev_number: int | None = None
    prev_formula: Formula | None = None
    for i in range(n_steps):
        last = i == n_steps - 1
        if i == 0:
            candidates = [
                (v, None)
                for v in pool
                if last or v.label in sampler.productive
            ]
        else:
            candidates = []
            for v in pool:
                if not last and v.label not in sampler.productive:
                    continue
                for slot in range(len(v.premises)):
                    binding = _Binding()
                    if match_pattern(v.premises[slot], prev_formula, binding):
                        block = (v, slot)
                        if (
                            len(alloc.letters)
                            + _new_letters_needed(v, (slot, prev_formula))
                            <= MAX_PREDICATE_LETTERS
                        ):
                            candidates.append(block)
        if not candidates:
            raise _DeadEnd
        variant, slot = rng.choice(candidates)
        consumed = None if slot is None else (slot, prev_formula)
        premises, conclusion = _instantiate_step(variant, consumed, alloc)
        from_numbers: list[int] = []
        for idx, formula in enumerate(premises):
            if slot is not None and idx == slot:
                from_numbers.append(prev_number)
            else:
                from_numbers.append(add_statement(formula, "premise"))
        derives = add_statement(conclusion, "final" if last else "intermediate")
        steps.append(StepInstance(variant, tuple(from_numbers), derives))
        prev_number, prev_formula = derives, conclusion

    tree = ArgumentTree(statements, steps, list(alloc.letters), list(alloc.constants))
    leaf_premises = [s.formula for s in tree.premises]
    if not check_entailment(leaf_premises, tree.final.formula):
        raise GenerationError(
            "catalog produced an invalid tree: "
            + "; ".join(render_formula(f) for f in leaf_premises)
        )
    return tree


def sample_argument(
    config: GeneratorConfig,
    rng: random.Random,
    catalog: SchemeCatalog | None = None,
    max_attempts: int = 60,
) -> ArgumentTree:
    """Sample a valid argument tree; bounded resampling on dead ends."""
    catalog = catalog or builtin_catalog()
    for _ in range(max_attempts):
        try:
            return _try_sample_tree(config, rng, catalog)
        except _DeadEnd:
            continue
    raise GenerationError("argument sampling kept hitting unification dead ends")


# ---------------------------------------------------------------------------
# Verbalization
# ---------------------------------------------------------------------------


@dataclass
class VerbalizedArgument:
    tree: ArgumentTree
    key_phrases: dict[str, str]
    const_names: dict[str, str]
    argdown: ArgdownArgument
    premises: tuple[QuotedStatement, ...]
    conclusion: tuple[QuotedStatement, ...]
    premises_form: tuple[QuotedStatement, ...]
    conclusion_form: tuple[QuotedStatement, ...]
    keys: tuple[tuple[str, str], ...]


def verbalize_argument(
    tree: ArgumentTree,
    lexicon: DomainLexicon,
    rng: random.Random,
    max_attempts: int = 20,
) -> VerbalizedArgument:
    """Assign phrases and render every statement; the argument block and
    the premise/conclusion/formalization dimensions are side products."""
    phrases = rng.sample(lexicon.phrases(), len(tree.letters))
    key_phrases = dict(zip(tree.letters, phrases))
    names = rng.sample(lexicon.names, max(1, len(tree.constants)))
    const_names = dict(zip(tree.constants, names)) if tree.constants else {}

    for _ in range(max_attempts):
        for statement in tree.statements:
            template = rng.choice(templates_for(statement.formula))
            statement.text = render_statement(
                statement.formula, key_phrases, const_names, template
            )
        texts = [s.text for s in tree.statements]
        if len(set(texts)) == len(texts):
            break
    else:
        raise GenerationError("could not verbalize statements uniquely")

    argdown = ArgdownArgument(
        statements=tuple((s.number, s.text) for s in tree.statements),
        inferences=tuple(
            InferenceStep(
                step.from_numbers,
                step.derives,
                step.variant.scheme_name,
                step.variant.variant,
            )
            for step in tree.steps
        ),
    )
    premises = tuple(
        QuotedStatement(s.text, s.number) for s in tree.premises
    )
    conclusion = (QuotedStatement(tree.final.text, tree.final.number),)
    premises_form = tuple(
        QuotedStatement(render_formula(s.formula), s.number) for s in tree.premises
    )
    conclusion_form = (
        QuotedStatement(render_formula(tree.final.formula), tree.final.number),
    )
    keys = tuple((letter, key_phrases[letter]) for letter in tree.letters)
    return VerbalizedArgument(
        tree, key_phrases, const_names, argdown,
        premises, conclusion, premises_form, conclusion_form, keys,
    )


# ---------------------------------------------------------------------------
# Presentation planning and source composition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PresentationPlan:
    statement_order: tuple[int, ...]  # retained statements, source order
    omitted: frozenset[int]
    final_explicit: bool
    n_distractors: int
    distractor_slots: tuple[int, ...]


@dataclass(frozen=True)
class Distractor:
    text: str
    formula: Formula


def plan_presentation(
    tree: ArgumentTree, config: GeneratorConfig, rng: random.Random
) -> PresentationPlan:
    premise_numbers = [s.number for s in tree.premises]
    intermediates = [s.number for s in tree.statements if s.role == "intermediate"]
    final_number = tree.final.number

    max_implicit = len(premise_numbers) - 1
    weights = config.implicit_premise_weights
    n_implicit = rng.choices(range(len(weights)), weights=weights)[0]
    n_implicit = min(n_implicit, max_implicit)
    omitted = set(rng.sample(premise_numbers, n_implicit))
    for number in intermediates:
        if rng.random() < config.p_implicit_intermediate:
            omitted.add(number)
    final_explicit = rng.random() < config.p_final_explicit
    if not final_explicit:
        omitted.add(final_number)

    retained = [s.number for s in tree.statements if s.number not in omitted]
    rng.shuffle(retained)

    n_distractors = rng.choices(
        range(len(config.distractor_weights)), weights=config.distractor_weights
    )[0]
    slots = tuple(
        sorted(rng.randint(0, len(retained)) for _ in range(n_distractors))
    )
    return PresentationPlan(
        statement_order=tuple(retained),
        omitted=frozenset(omitted),
        final_explicit=final_explicit,
        n_distractors=n_distractors,
        distractor_slots=slots,
    )


_DISTRACTOR_SHAPES = (
    "F a",
    "not F a",
    "F a & G a",
    "(x): F x -> G x",
    "(x): F x -> not G x",
)


def _build_distractors(
    verbalized: VerbalizedArgument,
    lexicon: DomainLexicon,
    count: int,
    rng: random.Random,
) -> list[Distractor]:
    used_phrases = set(verbalized.key_phrases.values())
    fresh_pool = [p for p in lexicon.phrases() if p not in used_phrases]
    distractors = []
    letter_offset = len(verbalized.tree.letters)
    for _ in range(count):
        shape = parse_formula(rng.choice(_DISTRACTOR_SHAPES))
        preds, consts = _pattern_letters(shape)
        if len(fresh_pool) < len(preds) or letter_offset + len(preds) > len(_LETTER_POOL):
            break
        binding = _Binding()
        phrase_map: dict[str, str] = {}
        for p in preds:
            phrase = rng.choice(fresh_pool)
            fresh_pool.remove(phrase)
            fresh_letter = _LETTER_POOL[letter_offset]
            letter_offset += 1
            binding.preds[p] = fresh_letter
            phrase_map[fresh_letter] = phrase
        name_map = {c: rng.choice(lexicon.names) for c in consts}
        binding.consts = {c: c for c in consts}
        formula = instantiate_pattern(shape, binding)
        template = rng.choice(templates_for(formula))
        text = render_statement(formula, phrase_map, name_map, template)
        distractors.append(Distractor(text, formula))
    return distractors


def _decapitalize(sentence: str) -> str:
    first_word = sentence.split(" ", 1)[0].rstrip(",")
    if first_word in _DECAPITALIZABLE:
        return sentence[0].lower() + sentence[1:]
    return sentence


def _mild_tweak(text: str, rng: random.Random) -> str:
    # One inserted token keeps the quote close to its counterpart statement.
    marker = "then they are "
    if marker in text and len(tokenize(text)) >= 8 and rng.random() < 0.25:
        return text.replace(marker, marker + "also ", 1)
    return text


def compose_source(
    verbalized: VerbalizedArgument,
    plan: PresentationPlan,
    lexicon: DomainLexicon,
    config: GeneratorConfig,
    rng: random.Random,
) -> tuple[str, tuple[QuotedStatement, ...], tuple[QuotedStatement, ...], RecordMeta, list[Distractor]]:
    """Render the story; returns (source, reasons, conjectures, meta,
    distractors)."""
    tree = verbalized.tree
    distractors = _build_distractors(verbalized, lexicon, plan.n_distractors, rng)

    premise_numbers = {s.number for s in tree.premises}
    sentences: list[str] = []
    reasons: list[QuotedStatement] = []
    conjectures: list[QuotedStatement] = []
    indicators_left = _INDICATOR_BUDGET

    items: list[tuple[str, object]] = [
        ("statement", number) for number in plan.statement_order
    ]
    for d, slot in zip(reversed(distractors), reversed(plan.distractor_slots)):
        items.insert(min(slot, len(items)), ("distractor", d))

    distractor_count = len(distractors)

    for index, (kind, payload) in enumerate(items):
        if kind == "distractor":
            sentences.append(payload.text)
            continue
        number = payload
        statement = tree.statement(number)
        core = statement.text
        if config.imprecise_rendition and rng.random() < 0.5:
            loose = [
                t for t in templates_for(statement.formula, include_imprecise=True)
                if t.imprecise
            ]
            if loose:
                core = render_statement(
                    statement.formula,
                    verbalized.key_phrases,
                    verbalized.const_names,
                    rng.choice(loose),
                )
        else:
            core = _mild_tweak(core, rng)
        is_conclusion = number not in premise_numbers
        indicator = None
        if index > 0 and indicators_left > 0:
            if is_conclusion and rng.random() < 0.5:
                indicator = rng.choice(_CONCLUSION_INDICATORS)
            elif not is_conclusion and rng.random() < 0.3:
                indicator = rng.choice(_PREMISE_INDICATORS)
        if indicator:
            indicators_left -= 1
            core = _decapitalize(core)
            sentences.append(f"{indicator} {core}")
        else:
            sentences.append(core)
        quote = QuotedStatement(core, number)
        if number in premise_numbers:
            reasons.append(quote)
        else:
            conjectures.append(quote)

    source = " ".join(sentences)
    if config.paraphrase:
        hook = _PARAPHRASE_HOOKS.get(config.paraphrase)
        if hook is None:
            raise ConfigError(f"unknown paraphrase hook {config.paraphrase!r}")
        source = hook(source)

    intermediates = [s.number for s in tree.statements if s.role == "intermediate"]
    n_implicit_concl = sum(1 for n in intermediates if n in plan.omitted)
    if not plan.final_explicit:
        n_implicit_concl += 1
    uses_complex = any(step.variant.intricate for step in tree.steps) or any(
        _contains_complexity(s.formula) for s in tree.statements
    )
    meta = RecordMeta(
        n_inference_steps=len(tree.steps),
        n_implicit_premises=sum(1 for n in plan.omitted if n in premise_numbers),
        n_implicit_conclusions=n_implicit_concl,
        final_conclusion_explicit=plan.final_explicit,
        n_distractors=distractor_count,
        uses_complex_schemes=uses_complex,
        domain_tag=lexicon.lexicon_id,
    )
    return source, tuple(reasons), tuple(conjectures), meta, distractors


def _contains_complexity(formula: Formula) -> bool:
    from deepa2.formula.syntax import Atom, Exists, ForAll, Iff, Implies

    if isinstance(formula, (Not, Or, And)):
        return True
    if isinstance(formula, Atom):
        return False
    if isinstance(formula, (ForAll, Exists)):
        return _contains_complexity(formula.body)
    if isinstance(formula, (Implies, Iff)):
        return _contains_complexity(formula.left) or _contains_complexity(formula.right)
    return False


# ---------------------------------------------------------------------------
# Corpus generation
# ---------------------------------------------------------------------------


@dataclass
class GenerationDetails:
    tree: ArgumentTree
    plan: PresentationPlan
    distractors: list[Distractor]


def generate_with_details(
    config: GeneratorConfig,
    n: int,
    seed: int | None = None,
    catalog: SchemeCatalog | None = None,
    max_failure_rate: float = 0.01,
) -> list[tuple[DeepA2Record, GenerationDetails]]:
    """Generate n validated records plus their construction details."""
    if n < 1:
        raise GenerationError("n must be at least 1")
    catalog = catalog or builtin_catalog()
    lexicon = builtin_lexicon(config.lexicon_id)
    seed = config.seed if seed is None else seed
    out = []
    failures = 0
    last_problems: object = None
    index = 0
    while len(out) < n:
        rng = random.Random(f"{config.lexicon_id}:{seed}:{index}")
        record_id = f"{config.lexicon_id}-{seed}-{index:05d}"
        index += 1
        built = None
        for _attempt in range(120):
            try:
                built = _generate_record(config, rng, catalog, lexicon, record_id)
                break
            except _RecordRejected as rejected:
                last_problems = rejected.args[0] if rejected.args else None
                continue
        if built is None:
            failures += 1
            if failures > max(1, int(max_failure_rate * n)):
                raise GenerationError(
                    f"generation failure rate exceeded {max_failure_rate:.0%}; "
                    f"last rejection: {last_problems}"
                )
            continue
        out.append(built)
    return out


def generate_corpus(
    config: GeneratorConfig,
    n: int,
    seed: int | None = None,
    catalog: SchemeCatalog | None = None,
) -> list[DeepA2Record]:
    """Generate n records, each internally validated; deterministic under
    (config, n, seed)."""
    return [record for record, _ in generate_with_details(config, n, seed, catalog)]


class _RecordRejected(Exception):
    pass


def _generate_record(
    config: GeneratorConfig,
    rng: random.Random,
    catalog: SchemeCatalog,
    lexicon: DomainLexicon,
    record_id: str,
) -> tuple[DeepA2Record, GenerationDetails]:
    try:
        tree = _try_sample_tree(config, rng, catalog)
        verbalized = verbalize_argument(tree, lexicon, rng)
    except (_DeadEnd, GenerationError) as err:
        raise _RecordRejected(str(err) or "sampling dead end") from None
    plan = plan_presentation(tree, config, rng)
    source, reasons, conjectures, meta, distractors = compose_source(
        verbalized, plan, lexicon, config, rng
    )
    meta = replace(meta, record_id=record_id)
    record = DeepA2Record(
        source=source,
        reasons=reasons,
        conjectures=conjectures,
        argdown=verbalized.argdown,
        premises=verbalized.premises,
        conclusion=verbalized.conclusion,
        premises_form=verbalized.premises_form,
        conclusion_form=verbalized.conclusion_form,
        keys=verbalized.keys,
        meta=meta,
    )
    details = GenerationDetails(tree, plan, distractors)
    problems = validate_record(record, config, catalog, details)
    if problems:
        raise _RecordRejected(problems)
    return record, details


def validate_record(
    record: DeepA2Record,
    config: GeneratorConfig,
    catalog: SchemeCatalog,
    details: GenerationDetails | None = None,
) -> list[str]:
    """Internal validity checks; an empty list means the record is sound."""
    problems: list[str] = []
    report = evaluate_analysis(work_dict_of_record(record), record, catalog)
    if report.basic_flaw_bits != (1, 1, 1, 1):
        problems.append(f"basic flaws {report.basic_flaw_bits}")
    if report.sys_val != 1:
        problems.append("target formalization not valid")
    if report.sys_sch != 1.0:
        problems.append(f"scheme ratio {report.sys_sch}")
    if config.paraphrase is None and report.exe_meq != 1:
        problems.append("quotes not mutually exclusive verbatim")
    if report.exe_ppr != 1.0 or report.exe_ppj != 1.0:
        problems.append("self-prediction below 1")
    if report.exe_te_prediction != record.meta.final_conclusion_explicit:
        problems.append("text-exploitation prediction mismatch")

    statements = dict(record.argdown.statements)
    for dim_items in (record.reasons, record.conjectures, record.premises,
                      record.conclusion, record.premises_form, record.conclusion_form):
        for q in dim_items:
            if q.ref not in statements:
                problems.append(f"dangling ref {q.ref}")

    letters = {letter for letter, _ in record.keys}
    from deepa2.formula import predicates_of

    for q in list(record.premises_form) + list(record.conclusion_form):
        missing = predicates_of(parse_formula(q.text)) - letters
        if missing:
            problems.append(f"keys miss letters {sorted(missing)}")

    if not config.imprecise_rendition:
        for quote in list(record.reasons) + list(record.conjectures):
            counterpart = statements.get(quote.ref)
            if counterpart is None:
                continue
            if default_scorer(quote.text, counterpart) < QUOTE_SCORE_BOUND:
                problems.append(
                    f"quote for ({quote.ref}) drifts below {QUOTE_SCORE_BOUND}"
                )

    if record_from_dict(record_to_dict(record)) != record:
        problems.append("serialization round trip failed")

    if details is not None and details.distractors:
        premise_forms = [parse_formula(q.text) for q in record.premises_form]
        conclusion_form = parse_formula(record.conclusion_form[0].text)
        extended = premise_forms + [d.formula for d in details.distractors]
        if not check_entailment(extended, conclusion_form):
            problems.append("distractors broke entailment")
        if not check_satisfiable(extended):
            problems.append("distractors made premises unsatisfiable")
    return problems


def subset_census(records: Iterable[DeepA2Record]) -> dict[str, int]:
    """Counts per homogeneous subset tag, plus untagged records."""
    from deepa2.records import ALL_SUBSETS, classify_subsets

    census = {tag: 0 for tag in ALL_SUBSETS}
    census["untagged"] = 0
    for record in records:
        tags = classify_subsets(record.meta)
        if not tags:
            census["untagged"] += 1
        for tag in tags:
            census[tag] += 1
    return census
