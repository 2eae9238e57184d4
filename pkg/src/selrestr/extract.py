"""Verb-complement triple extraction from bracketed trees.

For every clause the extractor finds the main verb and emits one
co-occurrence triple per complement: the subject noun phrase, the first
object noun phrase, and each prepositional complement.  The relation is
coded the way the triples file writes it: ``0`` for subject, ``1`` for
object, otherwise the preposition itself.

Head finding is deliberately simple.  The head of an NP is its rightmost
noun-tagged immediate child; an NP headed by anything else (pronouns,
nested phrases, numbers) yields a discarded record rather than a guess,
and forms the morphology cannot fold to an alphabetic lemma are
discarded as lemma failures.  Discarded records stay in the output
stream with ``discard_reason`` set so that every raw extraction is
accounted for.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .trees import ParseTree

NOUN = "noun"
VERB = "verb"

NON_NOUN_HEAD = "NonNounHead"
LEMMA_FAILURE = "LemmaFailure"

SUBJECT_CODE = "0"
OBJECT_CODE = "1"


class ExtractionError(ValueError):
    """Malformed extractor input (lemma table or triples file)."""


@dataclass(frozen=True, order=True)
class SynRel:
    """Syntactic relation between a verb and a complement head.

    ``code`` is "0" (subject), "1" (object) or a lowercase preposition.
    """

    code: str

    def __post_init__(self):
        if self.code in (SUBJECT_CODE, OBJECT_CODE):
            return
        if (
            not self.code
            or self.code != self.code.lower()
            or any(ch.isspace() for ch in self.code)
        ):
            raise ValueError(f"bad relation code {self.code!r}")

    @classmethod
    def prep(cls, preposition: str) -> "SynRel":
        return cls(preposition.lower())

    @property
    def is_subject(self) -> bool:
        return self.code == SUBJECT_CODE

    @property
    def is_object(self) -> bool:
        return self.code == OBJECT_CODE

    @property
    def is_prep(self) -> bool:
        return self.code not in (SUBJECT_CODE, OBJECT_CODE)

    def __str__(self) -> str:
        return self.code


SUBJECT = SynRel(SUBJECT_CODE)
OBJECT = SynRel(OBJECT_CODE)


@dataclass(frozen=True)
class TripleRecord:
    """One (verb, relation, noun) observation; discards carry their reason."""

    verb: str
    rel: SynRel
    noun: str
    sentence_id: int = 0
    discard_reason: str | None = None

    @property
    def kept(self) -> bool:
        return self.discard_reason is None


@dataclass(frozen=True)
class TagSet:
    """Label and tag inventories driving clause detection and head finding."""

    noun_tags: frozenset[str] = frozenset({"NN", "NNS", "NNP", "NNPS"})
    verb_tags: frozenset[str] = frozenset({"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"})
    prep_tags: frozenset[str] = frozenset({"IN", "TO"})
    clause_labels: frozenset[str] = frozenset({"S", "SINV"})
    np_labels: frozenset[str] = frozenset({"NP"})
    vp_labels: frozenset[str] = frozenset({"VP"})
    pp_labels: frozenset[str] = frozenset({"PP"})

    @classmethod
    def from_json(cls, text: str) -> "TagSet":
        data = json.loads(text)
        fields = {}
        for name in cls.__dataclass_fields__:
            if name in data:
                fields[name] = frozenset(data[name])
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ExtractionError(f"unknown tagset keys: {', '.join(sorted(unknown))}")
        return cls(**fields)

    @classmethod
    def from_file(cls, path) -> "TagSet":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(f.read())


PENN = TagSet()


class LemmaTable:
    """Lookup table (surface form, coarse POS) -> lemma; forms are case-folded."""

    def __init__(self, entries: dict[tuple[str, str], str] | None = None):
        self._entries = {}
        if entries:
            for (form, pos), lemma in entries.items():
                self._entries[form.lower(), pos] = lemma

    def lookup(self, form: str, pos: str) -> str | None:
        return self._entries.get((form.lower(), pos))

    def __len__(self) -> int:
        return len(self._entries)

    @classmethod
    def from_text(cls, text: str) -> "LemmaTable":
        entries: dict[tuple[str, str], str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip(" \r")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ExtractionError(
                    f"lemma table line {lineno}: expected 3 fields, got {len(fields)}"
                )
            form, pos, lemma = fields
            if pos not in (NOUN, VERB):
                raise ExtractionError(f"lemma table line {lineno}: bad POS {pos!r}")
            if not lemma:
                raise ExtractionError(f"lemma table line {lineno}: empty lemma")
            entries[form.lower(), pos] = lemma
        return cls(entries)

    @classmethod
    def from_file(cls, path) -> "LemmaTable":
        with open(path, encoding="utf-8") as f:
            return cls.from_text(f.read())


EMPTY_LEMMA_TABLE = LemmaTable()

# Fallback inflection stripping, tried longest suffix first.  A rule only
# fires when its stem is itself irreducible, which makes the rule-based
# path idempotent by construction.
_NOUN_RULES = (("ies", "y"), ("es", ""), ("s", ""))
_VERB_RULES = (("ies", "y"), ("ing", ""), ("ed", ""), ("s", ""))


def _strip_suffix(form: str, rules) -> str:
    for suffix, replacement in rules:
        if form.endswith(suffix):
            stem = form[: -len(suffix)] + replacement
            if stem and _strip_suffix(stem, rules) == stem:
                return stem
    return form


class LemmaResult(NamedTuple):
    lemma: str
    failed: bool


def lemmatize(form: str, pos: str, table: LemmaTable) -> LemmaResult:
    """Case-folded table lookup with suffix-stripping fallback.

    Forms containing non-alphabetic characters that miss the table are
    returned folded but flagged as failures.
    """
    if pos not in (NOUN, VERB):
        raise ValueError(f"bad coarse POS {pos!r}")
    folded = form.lower()
    hit = table.lookup(folded, pos)
    if hit is not None:
        return LemmaResult(hit, False)
    if folded.isalpha():
        rules = _NOUN_RULES if pos == NOUN else _VERB_RULES
        return LemmaResult(_strip_suffix(folded, rules), False)
    return LemmaResult(folded, True)


def np_head(np: ParseTree, tags: TagSet = PENN) -> tuple[str, str] | None:
    """Surface form and tag of the NP's head, or None when the rightmost
    noun-tagged leaf is missing at the top level of the phrase."""
    for child in reversed(np.children):
        if child.is_leaf and child.label in tags.noun_tags:
            return child.token, child.label
    return None


def _rightmost_leaf_token(tree: ParseTree) -> str:
    node = tree
    while not node.is_leaf:
        node = node.children[-1]
    return node.token


def _innermost_vp(vp: ParseTree, tags: TagSet) -> ParseTree:
    node = vp
    while True:
        nested = [c for c in node.children if c.label in tags.vp_labels]
        if not nested:
            return node
        node = nested[0]


def _verb_leaf(vp: ParseTree, tags: TagSet) -> ParseTree | None:
    for child in reversed(vp.children):
        if child.is_leaf and child.label in tags.verb_tags:
            return child
    return None


def extract_triples(
    tree: ParseTree,
    lemmas: LemmaTable = EMPTY_LEMMA_TABLE,
    tags: TagSet = PENN,
    sentence_id: int = 0,
) -> list[TripleRecord]:
    """Emit one TripleRecord per verb-complement pair found in the tree.

    Every clause node (a clause label with a VP child) is processed
    independently: subject from the nearest NP sister before the VP, the
    first NP inside the innermost VP as object, and each PP inside it as
    a prepositional complement.  Clauses with no identifiable verb yield
    nothing.
    """
    records: list[TripleRecord] = []
    for clause in tree.subtrees():
        if clause.label not in tags.clause_labels:
            continue
        vp = next((c for c in clause.children if c.label in tags.vp_labels), None)
        if vp is None:
            continue
        inner = _innermost_vp(vp, tags)
        verb = _verb_leaf(inner, tags)
        if verb is None:
            continue
        verb_lemma, verb_failed = lemmatize(verb.token, VERB, lemmas)

        def emit(rel: SynRel, np: ParseTree) -> None:
            head = np_head(np, tags)
            if head is None:
                records.append(
                    TripleRecord(
                        verb_lemma, rel, _rightmost_leaf_token(np), sentence_id, NON_NOUN_HEAD
                    )
                )
                return
            noun_lemma, noun_failed = lemmatize(head[0], NOUN, lemmas)
            reason = LEMMA_FAILURE if (verb_failed or noun_failed) else None
            records.append(TripleRecord(verb_lemma, rel, noun_lemma, sentence_id, reason))

        subject_np = None
        for child in clause.children:
            if child is vp:
                break
            if child.label in tags.np_labels:
                subject_np = child
        if subject_np is not None:
            emit(SUBJECT, subject_np)

        object_np = next((c for c in inner.children if c.label in tags.np_labels), None)
        if object_np is not None:
            emit(OBJECT, object_np)

        for child in inner.children:
            if child.label not in tags.pp_labels:
                continue
            prep = next(
                (c for c in child.children if c.is_leaf and c.label in tags.prep_tags), None
            )
            pp_np = next((c for c in child.children if c.label in tags.np_labels), None)
            if prep is None or pp_np is None:
                continue
            emit(SynRel.prep(prep.token), pp_np)
    return records


def extract_corpus(
    trees: Iterable[ParseTree],
    lemmas: LemmaTable = EMPTY_LEMMA_TABLE,
    tags: TagSet = PENN,
) -> list[TripleRecord]:
    records: list[TripleRecord] = []
    for sentence_id, tree in enumerate(trees):
        records.extend(extract_triples(tree, lemmas, tags, sentence_id))
    return records


# -- triples files -------------------------------------------------------


def format_triple(record: TripleRecord) -> str:
    return f"{record.verb}\t{record.rel.code}\t{record.noun}"


def write_triples(records: Iterable[TripleRecord], f) -> None:
    """Write kept records, one ``verb<TAB>rel<TAB>noun`` line each."""
    for r in records:
        if not r.kept:
            raise ValueError("discarded record in triples output; write it to the sidecar")
        f.write(format_triple(r) + "\n")


def write_discards(records: Iterable[TripleRecord], f) -> None:
    for r in records:
        if r.kept:
            raise ValueError("kept record in discard sidecar")
        f.write(f"{format_triple(r)}\t{r.discard_reason}\n")


def read_triples(text: str) -> list[TripleRecord]:
    """Parse a triples file; each line becomes a kept record."""
    records: list[TripleRecord] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip(" \r")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ExtractionError(f"triples line {lineno}: expected 3 fields, got {len(fields)}")
        verb, rel_code, noun = fields
        if not verb or not noun:
            raise ExtractionError(f"triples line {lineno}: empty verb or noun")
        try:
            rel = SynRel(rel_code)
        except ValueError as exc:
            raise ExtractionError(f"triples line {lineno}: {exc}") from None
        records.append(TripleRecord(verb, rel, noun, sentence_id=len(records)))
    return records
