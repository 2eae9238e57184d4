"""Scoring of acquired restrictions against annotated held-out triples.

Precision and recall share a numerator (triples satisfying some
restriction learned for their verb/position) and differ only in the
denominator: precision counts triples whose position has restrictions
at all, recall counts every evaluated triple.  That reading is the only
one under which precision can exceed recall, and both are kept as exact
ratios until display.

Diagnostic summaries aggregate per-class human judgments (a label file)
into a table of class counts and noun-occurrence counts per label.
Occurrence totals may exceed the number of triples because a noun can
belong to several labeled classes at once.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from .extract import ExtractionError, SynRel, TripleRecord
from .learner import SelectionalRestriction
from .taxonomy import SenseLexicon

PARSER_ERR = "parser_err"
LEMMA_ERR = "lemma_err"
_GOLD_STATUS = ("ok", PARSER_ERR, LEMMA_ERR)


@dataclass(frozen=True)
class GoldTriple:
    """A held-out triple, optionally annotated with the sense actually
    used in context and with the extraction verdict for its sentence."""

    record: TripleRecord
    correct_sense: str | None = None
    error: str | None = None

    @property
    def extraction_ok(self) -> bool:
        return self.error is None


class DiagnosticLabel(enum.Enum):
    """Human verdict on one acquired restriction class."""

    OK = "Ok"
    UP_ABS = "UpAbs"
    DOWN_ABS = "DownAbs"
    SENSES = "Senses"
    NOISE = "Noise"


@dataclass(frozen=True)
class DiagnosticRow:
    label: str
    classes: int
    class_pct: Decimal
    occurrences: int
    occurrence_pct: Decimal


# label line: verb, rel, class, label, optional occurrence count
LabelRow = tuple[str, SynRel, str, DiagnosticLabel, int | None]


def percentage(part: int, whole: int) -> Decimal:
    """part/whole as a percentage with one decimal, ties rounding up."""
    if whole == 0:
        return Decimal("0.0")
    return (Decimal(part * 100) / Decimal(whole)).quantize(
        Decimal("0.1"), rounding=ROUND_HALF_UP
    )


def fulfills(
    tr: TripleRecord,
    srs: Iterable[SelectionalRestriction],
    lexicon: SenseLexicon,
) -> bool:
    """True iff some restriction for (tr.verb, tr.rel) covers tr.noun."""
    if tr.discard_reason is not None:
        raise ValueError("cannot evaluate a discarded triple")
    if tr.noun not in lexicon:
        return False
    return any(
        sr.verb == tr.verb
        and sr.rel == tr.rel
        and lexicon.noun_in_class(tr.noun, sr.class_id)
        for sr in srs
    )


def _kept(triples: Iterable[TripleRecord]) -> list[TripleRecord]:
    return [t for t in triples if t.discard_reason is None]


def precision(
    triples: Iterable[TripleRecord],
    srs: Sequence[SelectionalRestriction],
    lexicon: SenseLexicon,
) -> Fraction | None:
    """Fulfilled / triples whose position has restrictions; None if no
    triple sits at a restricted position."""
    positions = {(sr.verb, sr.rel) for sr in srs}
    pool = [t for t in _kept(triples) if (t.verb, t.rel) in positions]
    if not pool:
        return None
    hits = sum(1 for t in pool if fulfills(t, srs, lexicon))
    return Fraction(hits, len(pool))


def recall(
    triples: Iterable[TripleRecord],
    srs: Sequence[SelectionalRestriction],
    lexicon: SenseLexicon,
) -> Fraction | None:
    """Fulfilled / all non-discarded triples; None if there are none."""
    pool = _kept(triples)
    if not pool:
        return None
    hits = sum(1 for t in pool if fulfills(t, srs, lexicon))
    return Fraction(hits, len(pool))


_CANONICAL_ORDER = (
    DiagnosticLabel.OK,
    DiagnosticLabel.UP_ABS,
    DiagnosticLabel.DOWN_ABS,
    DiagnosticLabel.SENSES,
    DiagnosticLabel.NOISE,
)

TOTAL_LABEL = "Total"


def diagnostic_summary(
    labels: Iterable[tuple[object, DiagnosticLabel, int]],
) -> list[DiagnosticRow]:
    """Aggregate (class key, label, occurrence count) judgments into one
    row per label plus a Total row.  A key may carry only one label."""
    seen: set[object] = set()
    classes = {label: 0 for label in _CANONICAL_ORDER}
    occurrences = {label: 0 for label in _CANONICAL_ORDER}
    for key, label, count in labels:
        if key in seen:
            raise ValueError(f"duplicate diagnostic label for {key!r}")
        if count < 0:
            raise ValueError(f"negative occurrence count for {key!r}")
        seen.add(key)
        classes[label] += 1
        occurrences[label] += count
    total_classes = sum(classes.values())
    total_occ = sum(occurrences.values())
    rows = [
        DiagnosticRow(
            label.value,
            classes[label],
            percentage(classes[label], total_classes),
            occurrences[label],
            percentage(occurrences[label], total_occ),
        )
        for label in _CANONICAL_ORDER
    ]
    rows.append(
        DiagnosticRow(
            TOTAL_LABEL,
            total_classes,
            percentage(total_classes, total_classes),
            total_occ,
            percentage(total_occ, total_occ),
        )
    )
    return rows


# -- annotation files ----------------------------------------------------


def read_gold(text: str) -> list[GoldTriple]:
    """Gold file: verb, rel, noun, then optionally the correct sense
    class ("-" if unknown) and an extraction status token."""
    out: list[GoldTriple] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 5):
            raise ExtractionError(
                f"gold line {lineno}: expected 3 or 5 fields, got {len(fields)}"
            )
        verb, rel_code, noun = fields[:3]
        try:
            record = TripleRecord(verb, SynRel(rel_code), noun)
        except ValueError as exc:
            raise ExtractionError(f"gold line {lineno}: {exc}") from None
        sense: str | None = None
        error: str | None = None
        if len(fields) == 5:
            sense = None if fields[3] == "-" else fields[3]
            if fields[4] not in _GOLD_STATUS:
                raise ExtractionError(
                    f"gold line {lineno}: bad status {fields[4]!r},"
                    f" expected one of {', '.join(_GOLD_STATUS)}"
                )
            error = None if fields[4] == "ok" else fields[4]
        out.append(GoldTriple(record, sense, error))
    return out


_LABEL_BY_NAME = {label.value: label for label in DiagnosticLabel}


def read_labels(text: str) -> list[LabelRow]:
    """Label file: verb, rel, class, label, optional occurrence count.

    Without the count column, occurrences are recounted from the gold
    triples at evaluation time."""
    out: list[LabelRow] = []
    seen: set[tuple[str, SynRel, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (4, 5):
            raise ExtractionError(
                f"labels line {lineno}: expected 4 or 5 fields, got {len(fields)}"
            )
        verb, rel_code, class_id = fields[:3]
        label = _LABEL_BY_NAME.get(fields[3])
        if label is None:
            raise ExtractionError(
                f"labels line {lineno}: unknown label {fields[3]!r},"
                f" expected one of {', '.join(_LABEL_BY_NAME)}"
            )
        try:
            rel = SynRel(rel_code)
        except ValueError as exc:
            raise ExtractionError(f"labels line {lineno}: {exc}") from None
        key = (verb, rel, class_id)
        if key in seen:
            raise ExtractionError(
                f"labels line {lineno}: duplicate label for"
                f" ({verb}, {rel.code}, {class_id})"
            )
        seen.add(key)
        count: int | None = None
        if len(fields) == 5:
            try:
                count = int(fields[4])
            except ValueError:
                raise ExtractionError(
                    f"labels line {lineno}: bad occurrence count {fields[4]!r}"
                ) from None
            if count < 0:
                raise ExtractionError(f"labels line {lineno}: negative occurrence count")
        out.append((verb, rel, class_id, label, count))
    return out


def occurrence_count(
    triples: Iterable[TripleRecord],
    verb: str,
    rel: SynRel,
    class_id: str,
    lexicon: SenseLexicon,
) -> int:
    return sum(
        1
        for t in triples
        if t.verb == verb
        and t.rel == rel
        and t.noun in lexicon
        and lexicon.noun_in_class(t.noun, class_id)
    )


# -- assembled report ----------------------------------------------------


@dataclass(frozen=True)
class EvalReport:
    gold_total: int
    excluded_parser: int
    excluded_lemma: int
    evaluated: int
    lexicon_covered: int
    sense_annotated: int
    sense_covered: int
    precision: Fraction | None
    recall: Fraction | None
    diagnostics: list[DiagnosticRow] | None = None

    def render_text(self) -> str:
        lines = [
            f"gold triples     {self.gold_total}",
            f"excluded         {self.excluded_parser + self.excluded_lemma}"
            f" (parser {self.excluded_parser}, lemma {self.excluded_lemma})",
            f"evaluated        {self.evaluated}",
            "noun in lexicon  " + self._share(self.lexicon_covered, self.evaluated),
            "sense covered    " + self._share(self.sense_covered, self.sense_annotated),
            "precision        " + self._ratio(self.precision),
            "recall           " + self._ratio(self.recall),
        ]
        if self.diagnostics is not None:
            lines.append("")
            lines.extend(render_diagnostics(self.diagnostics))
        return "\n".join(lines) + "\n"

    @staticmethod
    def _share(part: int, whole: int) -> str:
        return f"{part}/{whole} ({percentage(part, whole)}%)"

    @staticmethod
    def _ratio(value: Fraction | None) -> str:
        if value is None:
            return "N/A"
        return f"{float(value):.3f} ({value.numerator}/{value.denominator})"

    def to_dict(self) -> dict:
        def ratio(value: Fraction | None):
            if value is None:
                return None
            return {
                "value": float(value),
                "numerator": value.numerator,
                "denominator": value.denominator,
            }

        data = {
            "gold_total": self.gold_total,
            "excluded": {"parser": self.excluded_parser, "lemma": self.excluded_lemma},
            "evaluated": self.evaluated,
            "lexicon_covered": self.lexicon_covered,
            "sense_annotated": self.sense_annotated,
            "sense_covered": self.sense_covered,
            "precision": ratio(self.precision),
            "recall": ratio(self.recall),
        }
        if self.diagnostics is not None:
            data["diagnostics"] = [
                {
                    "label": row.label,
                    "classes": row.classes,
                    "class_pct": str(row.class_pct),
                    "occurrences": row.occurrences,
                    "occurrence_pct": str(row.occurrence_pct),
                }
                for row in self.diagnostics
            ]
        return data

    def render_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def render_diagnostics(rows: Sequence[DiagnosticRow]) -> list[str]:
    header = ("label", "classes", "class%", "occurrences", "occ%")
    table = [header] + [
        (
            row.label,
            str(row.classes),
            str(row.class_pct),
            str(row.occurrences),
            str(row.occurrence_pct),
        )
        for row in rows
    ]
    widths = [max(len(line[i]) for line in table) for i in range(5)]
    out = []
    for line in table:
        cells = [line[0].ljust(widths[0])]
        cells += [line[i].rjust(widths[i]) for i in range(1, 5)]
        out.append("  ".join(cells).rstrip())
    return out


def evaluate_gold(
    gold: Sequence[GoldTriple],
    srs: Sequence[SelectionalRestriction],
    lexicon: SenseLexicon,
    labels: Sequence[LabelRow] | None = None,
) -> EvalReport:
    """Full report over a gold file: coverage accounting, precision and
    recall on the well-extracted triples, optional diagnostics table."""
    records = [g.record for g in gold if g.extraction_ok]
    diagnostics = None
    if labels is not None:
        entries = []
        for verb, rel, class_id, label, count in labels:
            if count is None:
                count = occurrence_count(records, verb, rel, class_id, lexicon)
            entries.append(((verb, rel, class_id), label, count))
        diagnostics = diagnostic_summary(entries)
    sense_annotated = [g for g in gold if g.extraction_ok and g.correct_sense is not None]
    return EvalReport(
        gold_total=len(gold),
        excluded_parser=sum(1 for g in gold if g.error == PARSER_ERR),
        excluded_lemma=sum(1 for g in gold if g.error == LEMMA_ERR),
        evaluated=len(records),
        lexicon_covered=sum(1 for t in records if t.noun in lexicon),
        sense_annotated=len(sense_annotated),
        sense_covered=sum(
            1
            for g in sense_annotated
            if g.record.noun in lexicon
            and g.correct_sense in lexicon.senses(g.record.noun)
        ),
        precision=precision(records, srs, lexicon),
        recall=recall(records, srs, lexicon),
        diagnostics=diagnostics,
    )
