import random

import pytest

from uvk.canonicity import (
    BLOCKING_AXIOM,
    CorpusConfig,
    Sort,
    TermGenerator,
    corpus_env,
    generate_corpus,
    run_canonicity,
)
from uvk.evaluator import Strategy, Stuck, normalize
from uvk.kernel import Context, check, convertible, infer, whnf
from uvk.syntax import terms as t


def test_corpus_is_deterministic():
    config = CorpusConfig(seed=7, size=20)
    assert generate_corpus(config) == generate_corpus(config)
    assert generate_corpus(config) != generate_corpus(CorpusConfig(seed=8, size=20))


@pytest.mark.parametrize("sort", list(Sort))
def test_generated_terms_have_their_sort(sort):
    env = corpus_env()
    generator = TermGenerator(random.Random(sort.value), max_numeral=3)
    for _ in range(10):
        check(env, Context(), generator.generate(sort, 3), sort.term())


def test_small_corpus_is_canonical():
    summary = run_canonicity(CorpusConfig(seed=42, size=60))
    assert summary.total == 60
    assert summary.numerals == 60
    assert summary.violations == []
    assert summary.as_dict()["disagreements"] == 0


def test_injected_axiom_is_reported_stuck():
    summary = run_canonicity(CorpusConfig(seed=1, size=10, inject_axioms=1))
    assert summary.stuck == 1
    assert summary.numerals == 9
    (violation,) = summary.violations
    assert violation.index == 0
    assert isinstance(violation.classification, Stuck)
    assert violation.classification.blockers == frozenset({BLOCKING_AXIOM})
    assert violation.agree


@pytest.mark.slow
def test_subject_reduction_and_check_agreement():
    env = corpus_env()
    for term in generate_corpus(CorpusConfig(seed=2024, size=500)):
        ty, _ = infer(env, Context(), term)
        assert ty == t.Nat()
        check(env, Context(), term, ty)
        check(env, Context(), normalize(env, term), ty)
        check(env, Context(), whnf(env, Context(), term), ty)


@pytest.mark.slow
def test_five_hundred_terms_are_canonical():
    summary = run_canonicity(CorpusConfig(seed=2024, size=500))
    assert summary.total == summary.numerals == 500
    assert summary.stuck == 0
    assert summary.violations == []
    assert summary.as_dict()["disagreements"] == 0


@pytest.mark.parametrize("strategy", list(Strategy))
def test_normalization_is_idempotent(strategy):
    env = corpus_env()
    for term in generate_corpus(CorpusConfig(seed=11, size=80)):
        once = normalize(env, term, strategy)
        assert t.struct_eq(normalize(env, once, strategy), once)


@pytest.mark.parametrize("sort", list(Sort))
def test_head_reduction_preserves_types(sort):
    env = corpus_env()
    generator = TermGenerator(random.Random(f"whnf-{sort.value}"), max_numeral=3)
    for _ in range(20):
        term = generator.generate(sort, 3)
        ty, _ = infer(env, Context(), term)
        reduced_ty, _ = infer(env, Context(), whnf(env, Context(), term))
        assert convertible(env, Context(), reduced_ty, ty)
        assert convertible(env, Context(), ty, sort.term())
