import csv
import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqlab import (
    CATALOG_NAMES,
    DomainViolation,
    FunctionUnderTest,
    InsufficientTerms,
    Interval,
    RealSequence,
    ToleranceSchedule,
    UnboundedEvidence,
    adversarial_witness,
    catalog_lookup,
    compactness_probe,
    extract_p_quasi_cauchy_subsequence,
    parse_function,
    preserves_mode,
    repeat_each,
    test_p_quasi_cauchy as pqc_tester,
    uniformity_modulus,
)
from seqlab.continuity import convergent_generators, default_generators, probe_windows

UNIT = Interval.closed(0.0, 1.0)
LINE = Interval.real_line()


def fn(text, domain):
    return parse_function(text, domain)


# -- uniformity ------------------------------------------------------------------------------


def test_identity_modulus_is_delta():
    est = uniformity_modulus(fn("x", UNIT))
    assert est.holds
    for d, w in est.samples:
        assert w == pytest.approx(d, rel=1e-12)


def test_square_modulus_on_unit_interval():
    est = uniformity_modulus(fn("x^2", UNIT))
    assert est.holds
    for d, w in est.samples:
        # oracle: the sup of |x^2 - y^2| over |x - y| <= d on [0,1] is 1 - (1-d)^2
        assert w == pytest.approx(2 * d - d * d, rel=1e-9)


def test_reciprocal_modulus_diverges_near_zero():
    f = fn("1/x", Interval.open(0.0, 1.0))
    est = uniformity_modulus(f, window=Interval.open(1e-6, 1.0))
    assert est.fails
    # oracle on a grid: omega(0.1) on [1e-k, 1] is at least 1/1e-k - 1/(1e-k + 0.1)
    for iv, w in est.windows:
        assert w >= 1.0 / iv.lo - 1.0 / (iv.lo + 0.1) - 1e-6


def test_unbounded_domain_windows():
    assert uniformity_modulus(fn("x^2", LINE)).fails
    assert uniformity_modulus(fn("sin(x)", LINE)).holds
    wins = probe_windows(LINE)
    assert len(wins) == 6 and wins[-1].lo == -1e6 and wins[-1].hi == 1e6


def test_probe_window_must_be_inside_domain():
    with pytest.raises(DomainViolation):
        uniformity_modulus(fn("x", UNIT), window=Interval.closed(-1.0, 1.0))


# -- preservation -------------------------------------------------------------------------------


def test_identity_preserves():
    assert preserves_mode(fn("x", UNIT), 1).holds
    assert preserves_mode(fn("x", LINE), 2).holds


def test_square_breaks_sqrt_n():
    f = fn("x^2", LINE)
    v = preserves_mode(f, 1, [catalog_lookup("sqrt_n")])
    assert v.fails and v.params["generator"] == "sqrt_n"
    image = f.image(catalog_lookup("sqrt_n")).prefix(1000)
    np.testing.assert_allclose(image, np.arange(1, 1001), rtol=1e-12)


def test_square_on_unit_interval_preserves_defaults():
    assert preserves_mode(fn("x^2", UNIT), 1).holds
    assert preserves_mode(fn("x^2", UNIT), 2).holds


def test_generators_must_stay_in_domain():
    with pytest.raises(DomainViolation):
        preserves_mode(fn("x", UNIT), 1, [catalog_lookup("sqrt_n")])


def test_generator_suites_stay_inside_their_domains():
    domains = [UNIT, LINE, Interval.open(0.0, 1.0), Interval.parse("1,inf,co"), Interval.parse("-inf,-2,oc")]
    for dom in domains:
        for g in default_generators(dom, (1, 2)) + convergent_generators(dom, (1, 2)):
            assert dom.contains(g.prefix(10**4)).all(), (dom, g.name)
        for g in convergent_generators(dom, (1,)):
            assert dom.contains(np.array([g.properties["limit"]])).all()


# -- adversarial witnesses -----------------------------------------------------------------------


def test_square_on_line_has_witness():
    found = adversarial_witness(fn("x^2", LINE), 1, 0.5)
    assert found is not None
    w, image_verdict = found
    assert w.input_verdict.holds and image_verdict.fails


def test_identity_has_no_witness():
    assert adversarial_witness(fn("x", UNIT), 1, 0.5) is None
    assert adversarial_witness(fn("x", UNIT), 2, 1e-3) is None


def test_sin_inverse_witness_gap_two():
    w, image_verdict = adversarial_witness(fn("sin(1/x)", Interval.open(0.0, 1.0)), 2, 1.0)
    assert w.input_verdict.holds and image_verdict.fails
    assert pqc_tester(w.sequence, 2).holds
    pos = np.array(w.pair_positions)
    gaps = np.abs(w.image.values(pos) - w.image.values(pos - 2))
    assert (gaps >= 1.0).all()


def test_witness_csv_format():
    w, _ = adversarial_witness(fn("x^2", LINE), 1, 0.5)
    text = w.to_csv(50)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["index", "value", "image_value"]
    assert len(rows) == 51
    for i, (k, v, fv) in enumerate(rows[1:], start=1):
        assert int(k) == i
        assert float(v) == w.sequence(i)
        assert float(fv) == w.sequence(i) ** 2


# -- classification (shared session reports) ---------------------------------------------------


def test_reports_are_consistent(suite_reports):
    for name, rep in suite_reports.items():
        assert rep.consistent, (name, rep.inconsistencies)


def test_identity_report(suite_reports):
    rep = suite_reports["x on [0,1]"]
    for label in ("(Δ_1)", "(Δ_2)", "(c)", "(d, p=1)", "(d, p=2)"):
        assert rep[label].holds, label
    assert rep.uniformity.holds
    # a quasi-Cauchy generator that does not converge maps to itself, so
    # quasi-Cauchy inputs need not give convergent images
    assert rep["(Δ_1 c)"].fails


def test_square_on_line_report(suite_reports):
    rep = suite_reports["x^2 on R"]
    assert rep["(c)"].holds and rep["(d, p=1)"].holds
    for p in (1, 2):
        v = rep.get("delta_p", p)
        assert v.fails
        assert v.params["generator"] == "sqrt_n"
        assert rep.replay("delta_p", p) >= v.epsilon
    assert rep.uniformity.fails


def test_step_report(suite_reports):
    rep = suite_reports["step on [-1,1]"]
    c = rep["(c)"]
    assert c.fails
    g = c.params["generator"]
    assert "(-1)^n" in g and "/n" in g
    assert rep.replay("c", None) >= c.epsilon
    assert rep["(Δ_1)"].fails


def test_report_failures_replay(suite_reports):
    for rep in suite_reports.values():
        for (kind, p), v in rep.verdicts.items():
            if v.fails:
                assert rep.replay(kind, p) >= v.epsilon


def test_report_json(suite_reports, validate):
    for rep in suite_reports.values():
        validate(rep.to_json(), "continuity_report")


def test_uniform_iff_witness(suite_reports, function_suite):
    # uniform continuity fails exactly when a witness exists
    for name, rep in suite_reports.items():
        f = function_suite[name]
        if rep.uniformity.fails:
            assert all(rep.adversarial[p] is not None for p in rep.p_list), name
        else:
            assert rep.uniformity.holds, name
            assert adversarial_witness(f, 1, 0.25) is None, name


def test_gap_p_preservation_implies_gap_one(suite_reports):
    # the generator suite is closed under repeat_each, so gap-p preservation
    # carries over to gap 1
    for name, rep in suite_reports.items():
        if rep.get("delta_p", 2).holds:
            assert rep.get("delta_p", 1).holds, name


def test_images_of_bounded_generators_are_bounded(suite_reports, function_suite):
    for name, rep in suite_reports.items():
        f = function_suite[name]
        if not rep.get("delta_p", 1).holds or not f.domain.bounded:
            continue
        for g in default_generators(f.domain, (1,)):
            if not np.isfinite(g.prefix(10**4)).all():
                continue
            verdict = compactness_probe(f.image(g).prefix(10**4), samples=2, sample_length=2000)
            assert verdict.bounded, (name, g.name)


# -- subsequence extraction and compactness ------------------------------------------------------


def test_alt_sign_extracts_constant_subsequence():
    sub = extract_p_quasi_cauchy_subsequence(catalog_lookup("alt_sign"), 1)
    assert set(sub.values) == {-1.0}
    assert (sub.indices % 2 == 1).all()
    assert sub.check().holds


def test_sin_n_subsequence_has_small_gaps():
    sub = extract_p_quasi_cauchy_subsequence(catalog_lookup("sin_n"), 1, gap_tol=1e-3, prefix=10**6)
    assert np.abs(np.diff(sub.values)).max() < 1e-3
    assert sub.indices.size >= 16
    x = catalog_lookup("sin_n").values(sub.indices)
    assert x.tobytes() == sub.values.tobytes()


@pytest.mark.parametrize(
    "name, index",
    [("naturals", 12), ("sqrt_n", 122), ("log_n", 22027), ("weighted_harmonic", 51)],
)
def test_unbounded_sequences_escape(name, index):
    with pytest.raises(UnboundedEvidence) as info:
        extract_p_quasi_cauchy_subsequence(catalog_lookup(name), 1)
    assert info.value.index == index
    s = catalog_lookup(name)
    assert abs(s(index) - s(1)) > 10.0


def test_compactness_examples():
    recip = compactness_probe(catalog_lookup("reciprocals"), 1)
    assert recip.bounded and not recip.trivial
    nat = compactness_probe(catalog_lookup("naturals"), 2)
    assert not nat.bounded
    chain = np.array(nat.witness)
    assert (np.diff(chain) > 2).all() and chain.size > 100
    assert not compactness_probe(catalog_lookup("log_n")).bounded
    assert compactness_probe(catalog_lookup("sin_n")).bounded
    for pts in ([], [4.2]):
        v = compactness_probe(pts)
        assert v.bounded and v.trivial


@given(
    st.lists(st.floats(min_value=-3, max_value=3), min_size=50, max_size=400),
    st.integers(1, 3),
    st.sampled_from([1e-1, 1e-2, 1e-3]),
)
def test_extractor_output_passes_its_check(values, p, tol):
    s = RealSequence.from_array(values, name="pts")
    try:
        sub = extract_p_quasi_cauchy_subsequence(
            s, p, Interval.closed(-4.0, 4.0), gap_tol=tol, prefix=len(values), min_terms=2
        )
    except InsufficientTerms:
        return
    assert sub.check().holds
    assert np.ptp(sub.values) < tol


@given(
    st.lists(st.sampled_from([-2.5, -0.1, 0.0, 1.75]), min_size=100, max_size=400),
    st.integers(1, 3),
    st.sampled_from([1e-1, 1e-2, 1e-3]),
)
def test_extractor_succeeds_on_finitely_many_values(values, p, tol):
    # each halving that separates two of the four values keeps the larger
    # share, so at least 50/2^3 late terms survive
    s = RealSequence.from_array(values, name="pts")
    sub = extract_p_quasi_cauchy_subsequence(
        s, p, Interval.closed(-4.0, 4.0), gap_tol=tol, prefix=len(values), min_terms=2
    )
    assert sub.check().holds
    assert np.ptp(sub.values) == 0.0


@given(st.sampled_from(CATALOG_NAMES))
def test_bounded_catalog_sequences_extract(name):
    s = catalog_lookup(name)
    if not s.properties.get("bounded"):
        return
    sub = extract_p_quasi_cauchy_subsequence(s, 1, gap_tol=1e-3, prefix=10**6)
    assert sub.check().holds


def test_functions_must_be_finite_on_domain():
    f = FunctionUnderTest(lambda x: 1.0 / x, Interval.closed(-1.0, 1.0), "1/x")
    with pytest.raises(DomainViolation):
        f(np.array([0.0]))


def test_repeat_each_generators_are_included():
    names = [g.name for g in default_generators(UNIT, (1, 3))]
    assert any(n.startswith("repeat_3(") for n in names)
    base = default_generators(UNIT, (1,))[0]
    assert repeat_each(base, 3).prefix(6).tolist() == [base(1)] * 3 + [base(2)] * 3


def test_schedule_reaches_the_probes():
    small = ToleranceSchedule(scales=(10**3, 10**4))
    v = preserves_mode(fn("x^2", UNIT), 1, sched=small)
    assert v.holds and v.scale == 10**4
