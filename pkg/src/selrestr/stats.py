"""Co-occurrence counts and class association scoring.

Counts are aggregated per (verb, relation, noun) key with marginals per
relation position.  Class-level quantities sum over the nouns whose
sense classes fall under the class, either whole occurrences (raw) or
occurrences weighted by the fraction of the noun's senses under the
class (sense-corrected).

Three scoring functions rank candidate classes for a (verb, position):

  assoc          P(c|v,s) * log2 [ P(v,c|s) / (P(v|s) P(c|s)) ]
  assoc_pair_mi  P(c|v,s) * log2 [ P(v,s,c) / (P(v,s) P(c)) ], with the
                 probabilities estimated over the whole triple space
  g2             signed Dunning log-likelihood ratio of the 2x2 table
                 (this verb vs. the rest) x (in class vs. out) at the
                 position, natural log, positive when the verb and the
                 class co-occur more than expected

Probabilities are exact rationals up to the final logarithm, so equal
quantities compare equal and independence gives a score of exactly 0.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .extract import ExtractionError, SynRel, TripleRecord
from .taxonomy import SenseLexicon


class ZeroDenominatorError(ValueError):
    """A conditioning event (position or verb) has no observations."""


class UnsupportedClassError(ValueError):
    """The class has no supporting occurrence for the given verb and position."""


class EstimatorKind(Enum):
    RAW = "raw"
    SENSE_CORRECTED = "sense"


class ScoreKind(Enum):
    ASSOC = "assoc"
    ASSOC_PAIR_MI = "pairmi"
    LOG_LIKELIHOOD_RATIO = "g2"


class CountsTable:
    """Immutable aggregation of kept triples with all position marginals."""

    def __init__(self, counts: Mapping[tuple[str, SynRel, str], int]):
        for key, n in counts.items():
            if n < 1:
                raise ValueError(f"count for {key} must be >= 1, got {n}")
        self.counts: dict[tuple[str, SynRel, str], int] = dict(counts)
        self.position_total: dict[SynRel, int] = {}
        self.verb_position_total: dict[tuple[str, SynRel], int] = {}
        self.noun_position_total: dict[tuple[str, SynRel], int] = {}
        self.noun_total: dict[str, int] = {}
        self._by_vs: dict[tuple[str, SynRel], dict[str, int]] = {}
        self._by_s: dict[SynRel, dict[str, int]] = {}
        for (v, s, n), c in self.counts.items():
            self.position_total[s] = self.position_total.get(s, 0) + c
            self.verb_position_total[v, s] = self.verb_position_total.get((v, s), 0) + c
            self.noun_position_total[n, s] = self.noun_position_total.get((n, s), 0) + c
            self.noun_total[n] = self.noun_total.get(n, 0) + c
            vs_map = self._by_vs.setdefault((v, s), {})
            vs_map[n] = vs_map.get(n, 0) + c
            s_map = self._by_s.setdefault(s, {})
            s_map[n] = s_map.get(n, 0) + c
        self.grand_total: int = sum(self.position_total.values())

    @property
    def verbs(self) -> set[str]:
        return {v for v, _ in self.verb_position_total}

    @property
    def nouns(self) -> set[str]:
        return set(self.noun_total)

    @property
    def positions(self) -> set[SynRel]:
        return set(self.position_total)

    def count(self, v: str, s: SynRel, n: str) -> int:
        return self.counts.get((v, s, n), 0)

    def total(self, s: SynRel) -> int:
        return self.position_total.get(s, 0)

    def vs_total(self, v: str, s: SynRel) -> int:
        return self.verb_position_total.get((v, s), 0)

    def nouns_for(self, v: str, s: SynRel) -> Mapping[str, int]:
        """Nouns observed with (v, s) and their occurrence counts."""
        return self._by_vs.get((v, s), {})

    def nouns_at(self, s: SynRel) -> Mapping[str, int]:
        return self._by_s.get(s, {})

    def verb_positions(self) -> list[tuple[str, SynRel]]:
        return sorted(self.verb_position_total, key=lambda vs: (vs[0], vs[1].code))


def accumulate(triples: Iterable[TripleRecord]) -> CountsTable:
    """Aggregate kept triples; passing a discarded record is an error."""
    counts: dict[tuple[str, SynRel, str], int] = {}
    for t in triples:
        if not t.kept:
            raise ValueError(f"cannot accumulate discarded triple {t}")
        key = (t.verb, t.rel, t.noun)
        counts[key] = counts.get(key, 0) + 1
    return CountsTable(counts)


def read_counts(text: str) -> CountsTable:
    """Parse a pre-aggregated ``verb<TAB>rel<TAB>noun<TAB>count`` file."""
    counts: dict[tuple[str, SynRel, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ExtractionError(f"counts line {lineno}: expected 4 fields, got {len(fields)}")
        verb, rel_code, noun, count_text = fields
        try:
            rel = SynRel(rel_code)
            count = int(count_text)
        except ValueError as exc:
            raise ExtractionError(f"counts line {lineno}: {exc}") from None
        if count < 1:
            raise ExtractionError(f"counts line {lineno}: count must be >= 1")
        key = (verb, rel, noun)
        counts[key] = counts.get(key, 0) + count
    return CountsTable(counts)


def write_counts(table: CountsTable, f) -> None:
    for (v, s, n), c in sorted(table.counts.items(), key=lambda kv: (kv[0][0], kv[0][1].code, kv[0][2])):
        f.write(f"{v}\t{s.code}\t{n}\t{c}\n")


def lexicon_misses(table: CountsTable, lexicon: SenseLexicon) -> set[str]:
    """Observed nouns with no lexicon entry (they never support a class)."""
    return {n for n in table.noun_total if n not in lexicon}


class CondProbs(NamedTuple):
    """The four estimates behind the association score, as exact rationals."""

    c_given_vs: Fraction
    v_given_s: Fraction
    c_given_s: Fraction
    vc_given_s: Fraction


def log_likelihood_ratio(k11, k12, k21, k22) -> float:
    """Signed G2 statistic of a 2x2 contingency table.

    G2 = 2 * sum k_ij ln(k_ij / E_ij) with 0 ln 0 = 0, negated when the
    top-left cell falls below its expectation; a zero marginal row or
    column gives 0 by convention.
    """
    cells = (k11, k12, k21, k22)
    if any(k < 0 for k in cells):
        raise ValueError(f"negative contingency cell in {cells}")
    r1, r2 = k11 + k12, k21 + k22
    c1, c2 = k11 + k21, k12 + k22
    n = r1 + r2
    if not (r1 and r2 and c1 and c2):
        return 0.0
    g = 0.0
    for k, row, col in ((k11, r1, c1), (k12, r1, c2), (k21, r2, c1), (k22, r2, c2)):
        if k > 0:
            g += float(k) * math.log(float(k) * float(n) / (float(row) * float(col)))
    g *= 2.0
    if k11 * n > r1 * c1:
        return g
    if k11 * n < r1 * c1:
        return -g
    return 0.0


class Scorer:
    """Binds a counts table to a taxonomy and lexicon and scores classes.

    All class-level sums are cached per (position, estimator), so the
    object is cheap to query repeatedly; it is read-only after
    construction and safe to share across worker threads.
    """

    def __init__(self, table: CountsTable, lexicon: SenseLexicon):
        self.table = table
        self.lexicon = lexicon
        self.taxonomy = lexicon.taxonomy
        self._vs_class_counts: dict = {}
        self._position_class_counts: dict = {}
        self._global_class_counts: dict = {}

    # -- class-level counts ---------------------------------------------

    def _weighted_class_sums(self, noun_counts: Mapping[str, int], est: EstimatorKind):
        sums: dict[str, Fraction | int] = {}
        if est is EstimatorKind.RAW:
            for n, c in noun_counts.items():
                if n not in self.lexicon:
                    continue
                for cls in self.lexicon.classes_of(n):
                    sums[cls] = sums.get(cls, 0) + c
        else:
            for n, c in noun_counts.items():
                if n not in self.lexicon:
                    continue
                for cls, w in self.lexicon.class_weights(n).items():
                    sums[cls] = sums.get(cls, 0) + c * w
        return sums

    def class_counts(self, v: str, s: SynRel, est: EstimatorKind) -> Mapping:
        """All classes supported by (v, s) with their (possibly weighted) counts."""
        key = (v, s, est)
        cached = self._vs_class_counts.get(key)
        if cached is None:
            cached = self._weighted_class_sums(self.table.nouns_for(v, s), est)
            self._vs_class_counts[key] = cached
        return cached

    def class_count(self, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW):
        """Occurrences of nouns of class ``c`` with (v, s); 0 if unsupported."""
        return self.class_counts(v, s, est).get(c, 0)

    def position_class_count(self, s: SynRel, c: str, est: EstimatorKind):
        """Class occurrences at position ``s`` across all verbs."""
        key = (s, est)
        cached = self._position_class_counts.get(key)
        if cached is None:
            cached = self._weighted_class_sums(self.table.nouns_at(s), est)
            self._position_class_counts[key] = cached
        return cached.get(c, 0)

    def global_class_count(self, c: str, est: EstimatorKind):
        cached = self._global_class_counts.get(est)
        if cached is None:
            cached = self._weighted_class_sums(self.table.noun_total, est)
            self._global_class_counts[est] = cached
        return cached.get(c, 0)

    # -- probabilities and scores ---------------------------------------

    def cond_probs(
        self, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW
    ) -> CondProbs:
        """P(c|v,s), P(v|s), P(c|s) and P(v,c|s) for the given events."""
        total = self.table.total(s)
        if total == 0:
            raise ZeroDenominatorError(f"no observations at position {s.code!r}")
        vs = self.table.vs_total(v, s)
        if vs == 0:
            raise ZeroDenominatorError(f"no observations of verb {v!r} at position {s.code!r}")
        joint = self.class_count(v, s, c, est)
        at_position = self.position_class_count(s, c, est)
        return CondProbs(
            c_given_vs=Fraction(joint) / vs,
            v_given_s=Fraction(vs, total),
            c_given_s=Fraction(at_position) / total,
            vc_given_s=Fraction(joint) / total,
        )

    def assoc_components(
        self, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW
    ) -> tuple[float, float]:
        """(P(c|v,s), conditional mutual information) whose product is assoc."""
        p = self.cond_probs(v, s, c, est)
        if p.vc_given_s == 0:
            raise UnsupportedClassError(
                f"class {c!r} has no support with verb {v!r} at position {s.code!r}"
            )
        mi = math.log2(p.vc_given_s / (p.v_given_s * p.c_given_s))
        return float(p.c_given_vs), mi

    def assoc(self, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW) -> float:
        weight, mi = self.assoc_components(v, s, c, est)
        return weight * mi

    def assoc_pair_mi(
        self, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW
    ) -> float:
        """Association with the verb-position pair treated as one event,
        estimated over the whole triple space rather than per position."""
        grand = self.table.grand_total
        if grand == 0:
            raise ZeroDenominatorError("empty counts table")
        joint = self.class_count(v, s, c, est)
        if joint == 0:
            raise UnsupportedClassError(
                f"class {c!r} has no support with verb {v!r} at position {s.code!r}"
            )
        vs = self.table.vs_total(v, s)
        p_vsc = Fraction(joint) / grand
        p_vs = Fraction(vs, grand)
        p_c = Fraction(self.global_class_count(c, est)) / grand
        mi = math.log2(p_vsc / (p_vs * p_c))
        return float(Fraction(joint) / vs) * mi

    def g2(self, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW) -> float:
        """Signed log-likelihood ratio of class-vs-verb at the position."""
        total = self.table.total(s)
        if total == 0:
            raise ZeroDenominatorError(f"no observations at position {s.code!r}")
        k11 = self.class_count(v, s, c, est)
        k12 = self.table.vs_total(v, s) - k11
        k21 = self.position_class_count(s, c, est) - k11
        k22 = total - k11 - k12 - k21
        return log_likelihood_ratio(k11, k12, k21, k22)

    def score(
        self, kind: ScoreKind, v: str, s: SynRel, c: str, est: EstimatorKind = EstimatorKind.RAW
    ) -> float:
        if kind is ScoreKind.ASSOC:
            return self.assoc(v, s, c, est)
        if kind is ScoreKind.ASSOC_PAIR_MI:
            return self.assoc_pair_mi(v, s, c, est)
        return self.g2(v, s, c, est)
