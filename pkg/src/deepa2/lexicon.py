"""Domain lexicons: pools of predicate phrases and proper names.

A lexicon file is a small plain-text table: an ``id`` line, comma-separated
``names``, relation templates with a ``%`` object slot, and the objects to
fill them with.  Predicate phrases are the relation/object cross product,
so two lexicons with disjoint relations and objects share no phrase.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from deepa2.errors import ConfigError

BUILTIN_LEXICON_IDS = ("places_people", "sports_clubs")


@dataclass(frozen=True)
class DomainLexicon:
    lexicon_id: str
    names: tuple[str, ...]
    relations: tuple[str, ...]
    objects: tuple[str, ...]

    def __post_init__(self):
        if not (self.names and self.relations and self.objects):
            raise ConfigError(f"lexicon {self.lexicon_id!r} has an empty pool")
        for relation in self.relations:
            if "%" not in relation:
                raise ConfigError(f"relation {relation!r} lacks the % object slot")

    def phrases(self) -> list[str]:
        """All predicate phrases, relation-major order."""
        return [r.replace("%", o) for r in self.relations for o in self.objects]

    @classmethod
    def from_text(cls, text: str) -> "DomainLexicon":
        fields: dict[str, str] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition(":")
            if not sep:
                raise ConfigError(f"malformed lexicon line: {line!r}")
            fields[key.strip()] = value.strip()
        try:
            return cls(
                lexicon_id=fields["id"],
                names=_split(fields["names"]),
                relations=_split(fields["relations"]),
                objects=_split(fields["objects"]),
            )
        except KeyError as err:
            raise ConfigError(f"lexicon misses field {err}") from None

    @classmethod
    def load(cls, path) -> "DomainLexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def _split(value: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in value.split(",") if part.strip())


_cache: dict[str, DomainLexicon] = {}


def builtin_lexicon(lexicon_id: str) -> DomainLexicon:
    if lexicon_id not in _cache:
        if lexicon_id not in BUILTIN_LEXICON_IDS:
            raise ConfigError(
                f"unknown lexicon {lexicon_id!r}; built in: {BUILTIN_LEXICON_IDS}"
            )
        text = (
            resources.files("deepa2.data")
            .joinpath(f"lexicons/{lexicon_id}.txt")
            .read_text("utf-8")
        )
        _cache[lexicon_id] = DomainLexicon.from_text(text)
    return _cache[lexicon_id]
