"""Learner tests: candidate generation, greedy disjoint selection, the
group pipeline, and the restrictions file format."""

import io
import json
import random

import pytest

from conftest import TOY_PARENTS, TOY_SENSES, TOY_TRIPLES, build_world
from selrestr.extract import ExtractionError, SynRel
from selrestr.learner import (
    LearnerConfig,
    ScoredCandidate,
    ScoringFailure,
    SelectionalRestriction,
    candidate_space,
    format_restriction,
    learn_all,
    learn_group,
    read_restrictions,
    score_candidates,
    select_disjoint,
    write_restrictions,
    write_restrictions_jsonl,
)
from selrestr.stats import EstimatorKind, ScoreKind
from selrestr.taxonomy import load_taxonomy

S0 = SynRel("0")
S1 = SynRel("1")

LOOSE = LearnerConfig(threshold=1, min_verb_support=1)


def tax_of(scorer):
    return scorer.taxonomy


@pytest.fixture(scope="module")
def toy():
    return build_world(TOY_PARENTS, TOY_SENSES, TOY_TRIPLES)


# two disjoint classes tie on score and both survive selection
EAT_PARENTS = {
    "thing": set(),
    "fruit": {"thing"},
    "meat": {"thing"},
    "liquid": {"thing"},
}
EAT_SENSES = {
    "apple": frozenset({"fruit"}),
    "pork": frozenset({"meat"}),
    "water": frozenset({"liquid"}),
}
EAT_TRIPLES = [("eat", "1", "apple")] * 2 + [("eat", "1", "pork")] * 2 + [
    ("drink", "1", "water")
]


@pytest.fixture(scope="module")
def eat():
    return build_world(EAT_PARENTS, EAT_SENSES, EAT_TRIPLES)


class TestLearnerConfig:
    def test_defaults(self):
        cfg = LearnerConfig()
        assert cfg.threshold == 3
        assert cfg.scorer is ScoreKind.ASSOC
        assert cfg.estimator is EstimatorKind.RAW
        assert cfg.min_verb_support == 10
        assert cfg.keep_nonpositive is True

    @pytest.mark.parametrize("bad", [{"threshold": 0}, {"min_verb_support": 0}])
    def test_validation(self, bad):
        with pytest.raises(ValueError, match="must be >= 1"):
            LearnerConfig(**bad)


class TestCandidateSpace:
    def test_toy_drink_subject(self, toy):
        cands = candidate_space(toy, "drink", S0, LOOSE)
        by_id = {c.class_id: c for c in cands}
        assert [c.class_id for c in cands] == sorted(by_id)
        assert set(by_id) == {"dog", "cat", "animal", "entity"}
        assert (by_id["animal"].support, by_id["animal"].n_nouns) == (3, 2)
        assert (by_id["dog"].support, by_id["dog"].n_nouns) == (2, 1)
        assert (by_id["entity"].support, by_id["entity"].n_nouns) == (3, 2)
        assert all(c.score is None for c in cands)

    def test_threshold_prunes(self, toy):
        cfg = LearnerConfig(threshold=2, min_verb_support=1)
        cands = candidate_space(toy, "drink", S0, cfg)
        assert {c.class_id for c in cands} == {"dog", "animal", "entity"}

    def test_min_verb_support_enforced(self, toy):
        cfg = LearnerConfig(threshold=1, min_verb_support=2)
        with pytest.raises(ValueError, match="fewer than 2 observations"):
            candidate_space(toy, "sleep", S0, cfg)

    def test_unknown_nouns_contribute_no_classes(self):
        scorer = build_world(
            TOY_PARENTS, TOY_SENSES, TOY_TRIPLES + [("drink", "0", "xyzzy")] * 5
        )
        cands = candidate_space(scorer, "drink", S0, LOOSE)
        by_id = {c.class_id: c for c in cands}
        # the unknown noun bumps verb support but supports no class
        assert by_id["animal"].support == 3
        assert "xyzzy" not in by_id

    def test_support_is_raw_even_for_sense_estimator(self, toy):
        cfg = LearnerConfig(
            threshold=1, min_verb_support=1, estimator=EstimatorKind.SENSE_CORRECTED
        )
        cands = {c.class_id: c for c in candidate_space(toy, "drink", S0, cfg)}
        assert cands["animal"].support == 3


class TestScoreCandidates:
    def test_scores_filled(self, toy):
        cands = candidate_space(toy, "drink", S0, LOOSE)
        scored = score_candidates(toy, "drink", S0, cands, LOOSE)
        by_id = {c.class_id: c.score for c in scored}
        assert by_id["animal"] == pytest.approx(0.41503749927884376, rel=1e-12)
        assert by_id["entity"] == 0.0

    def test_failures_sink_collects(self, toy):
        bogus = [ScoredCandidate("liquid", None, 1, 1)]
        failures: list[ScoringFailure] = []
        scored = score_candidates(toy, "drink", S0, bogus, LOOSE, failures)
        assert scored == []
        assert len(failures) == 1
        f = failures[0]
        assert (f.verb, f.rel, f.class_id) == ("drink", S0, "liquid")
        assert "no support" in f.message

    def test_failures_without_sink_are_silent(self, toy):
        bogus = [ScoredCandidate("liquid", None, 1, 1)]
        assert score_candidates(toy, "drink", S0, bogus, LOOSE) == []


def _cand(cid, score, n_nouns=1, support=1):
    return ScoredCandidate(cid, score, n_nouns, support)


@pytest.fixture(scope="module")
def chain_tax():
    tax, _ = load_taxonomy("a\t-\nb\ta\nc\tb\nx\t-\n", "")
    return tax


class TestSelectDisjoint:
    def test_best_first_drops_relatives(self, chain_tax):
        picked = select_disjoint(
            [_cand("a", 1.0), _cand("b", 3.0), _cand("c", 2.0)], chain_tax
        )
        assert [c.class_id for c in picked] == ["b"]

    def test_unrelated_classes_coexist(self, chain_tax):
        picked = select_disjoint([_cand("b", 3.0), _cand("x", 1.0)], chain_tax)
        assert [c.class_id for c in picked] == ["b", "x"]

    def test_descendant_removes_ancestor(self, chain_tax):
        picked = select_disjoint([_cand("c", 5.0), _cand("a", 4.0)], chain_tax)
        assert [c.class_id for c in picked] == ["c"]

    def test_tie_breaks_support_then_nouns_then_id(self, chain_tax):
        a = _cand("x", 1.0, n_nouns=1, support=9)
        b = _cand("b", 1.0, n_nouns=1, support=7)
        assert select_disjoint([a, b], chain_tax)[0] is a
        c = _cand("x", 1.0, n_nouns=4, support=7)
        assert select_disjoint([b, c], chain_tax)[0] is c
        d = _cand("a", 1.0, n_nouns=1, support=7)
        assert select_disjoint([b, d], chain_tax)[0] is d

    def test_permutation_invariance(self, chain_tax):
        base = [
            _cand("a", 0.5, 2, 5),
            _cand("b", 0.5, 2, 5),
            _cand("c", 0.25, 1, 3),
            _cand("x", 0.5, 2, 5),
        ]
        expected = select_disjoint(base, chain_tax)
        rng = random.Random(11)
        for _ in range(20):
            shuffled = base[:]
            rng.shuffle(shuffled)
            assert select_disjoint(shuffled, chain_tax) == expected

    def test_positive_scaling_invariance(self, chain_tax):
        base = [_cand("a", 0.2, 1, 4), _cand("x", 0.7, 2, 2), _cand("c", 0.4, 1, 6)]
        ids = [c.class_id for c in select_disjoint(base, chain_tax)]
        scaled = [c.with_score(c.score * 37.5) for c in base]
        assert [c.class_id for c in select_disjoint(scaled, chain_tax)] == ids

    def test_unscored_candidate_rejected(self, chain_tax):
        with pytest.raises(ValueError, match="unscored"):
            select_disjoint([_cand("a", None)], chain_tax)

    def test_empty_input(self, chain_tax):
        assert select_disjoint([], chain_tax) == []


class TestLearnGroup:
    def test_toy_drink_subject(self, toy):
        srs = learn_group(toy, "drink", S0, LOOSE)
        assert len(srs) == 1
        sr = srs[0]
        assert (sr.verb, sr.rel, sr.class_id) == ("drink", S0, "animal")
        assert sr.score == pytest.approx(0.41503749927884376, rel=1e-12)
        assert (sr.n_nouns, sr.support) == (2, 3)

    def test_tie_on_zero_picks_first_class_id(self, toy):
        # all (drink, object) candidates score exactly 0; entity wins the tie
        srs = learn_group(toy, "drink", S1, LOOSE)
        assert [(sr.class_id, sr.score) for sr in srs] == [("entity", 0.0)]

    def test_drop_nonpositive(self, toy):
        cfg = LearnerConfig(threshold=1, min_verb_support=1, keep_nonpositive=False)
        assert learn_group(toy, "drink", S1, cfg) == []
        srs = learn_group(toy, "sleep", S0, cfg)
        assert [sr.class_id for sr in srs] == ["man"]

    def test_two_disjoint_winners(self, eat):
        srs = learn_group(eat, "eat", S1, LOOSE)
        assert [(sr.class_id, sr.n_nouns, sr.support) for sr in srs] == [
            ("fruit", 1, 2),
            ("meat", 1, 2),
        ]
        for sr in srs:
            assert sr.score == pytest.approx(0.16096404744368117, rel=1e-12)


class TestLearnAll:
    def test_toy_full_run(self, toy):
        srs = learn_all(toy, LOOSE)
        assert [(sr.verb, sr.rel.code, sr.class_id) for sr in srs] == [
            ("drink", "0", "animal"),
            ("drink", "1", "entity"),
            ("sleep", "0", "man"),
        ]
        assert srs[2].score == pytest.approx(2.0, rel=1e-12)

    def test_min_verb_support_filters_groups(self, toy):
        cfg = LearnerConfig(threshold=1, min_verb_support=2)
        srs = learn_all(toy, cfg)
        assert {(sr.verb, sr.rel.code) for sr in srs} == {("drink", "0"), ("drink", "1")}

    def test_workers_do_not_change_output(self, eat):
        for workers in (2, 4, 7):
            assert learn_all(eat, LOOSE, workers=workers) == learn_all(eat, LOOSE)

    def test_failures_sink_plumbed(self, toy):
        failures: list[ScoringFailure] = []
        learn_all(toy, LOOSE, failures=failures)
        # the pipeline only scores supported candidates, so nothing fails here
        assert failures == []


class TestRestrictionFiles:
    SR = SelectionalRestriction("drink", S0, "animal", 0.41503749927884376, 2, 3)

    def test_format_six_decimals(self):
        assert format_restriction(self.SR) == "drink\t0\tanimal\t0.415037\t2\t3"

    def test_negative_zero_normalized(self):
        sr = SelectionalRestriction("drink", S1, "entity", -0.0, 1, 3)
        assert format_restriction(sr) == "drink\t1\tentity\t0.000000\t1\t3"

    def test_write_with_header(self):
        buf = io.StringIO()
        write_restrictions([self.SR], buf, header={"tool": "x", "threshold": "3"})
        assert buf.getvalue() == (
            "# tool=x\n# threshold=3\ndrink\t0\tanimal\t0.415037\t2\t3\n"
        )

    def test_round_trip(self):
        buf = io.StringIO()
        write_restrictions([self.SR], buf, header={"k": "v"})
        back = read_restrictions(buf.getvalue())
        assert len(back) == 1
        sr = back[0]
        assert (sr.verb, sr.rel, sr.class_id) == ("drink", S0, "animal")
        assert sr.score == pytest.approx(self.SR.score, abs=5e-7)
        assert (sr.n_nouns, sr.support) == (2, 3)

    def test_jsonl(self):
        buf = io.StringIO()
        write_restrictions_jsonl([self.SR], buf)
        row = json.loads(buf.getvalue())
        assert row == {
            "verb": "drink",
            "rel": "0",
            "class": "animal",
            "score": 0.415037,
            "n_nouns": 2,
            "support": 3,
        }

    def test_read_field_count_error(self):
        with pytest.raises(ExtractionError, match="line 1: expected 6 fields"):
            read_restrictions("drink\t0\tanimal\t0.4\t2\n")

    def test_read_bad_number(self):
        with pytest.raises(ExtractionError, match="restrictions line 2"):
            read_restrictions("drink\t0\tanimal\t0.4\t2\t3\ndrink\t0\tdog\tx\t1\t2\n")

    def test_read_bad_relation(self):
        with pytest.raises(ExtractionError, match="restrictions line 1"):
            read_restrictions("drink\tSUBJ\tanimal\t0.4\t2\t3\n")

    def test_read_skips_header(self):
        assert read_restrictions("# tool=x\n\n") == []
