"""Acceptance suite: one test per criterion, summarised at the end of the run.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``;
either way a ``criterion NN: PASS/FAIL`` line is printed for each test.
"""

import io
import json
import math
import random
import sys
import time

import numpy as np
import pytest

from seqlab import (
    CATALOG_NAMES,
    Interval,
    InvalidLacunarySchedule,
    LacunarySchedule,
    ParseError,
    RealSequence,
    UnboundedEvidence,
    adversarial_witness,
    apply_method,
    catalog_lookup,
    delta,
    delta_p_method,
    extract_p_quasi_cauchy_subsequence,
    hierarchy_report,
    parse_function,
    parse_sequence,
    preserves_mode,
    regularity_spot_check,
    test_p_quasi_cauchy as pqc_tester,
    test_stat_quasi_cauchy as sqc_tester,
)
from seqlab.cli import run
from seqlab.exprlang import parse_expr, pretty
from seqlab.modes import deviation_counts

from test_exprlang import check_total, random_ast

# documented in README.md; criterion 10 runs each twice
DOCUMENTED_INVOCATIONS = [
    ["classify", "--seq", "(-1)^n", "--p", "1,2"],
    ["classify", "--seq", "harmonic_partial"],
    ["probe-fn", "--fn", "x^2", "--domain=-inf,inf", "--p", "1,2"],
    ["witness", "--fn", "sin(1/x)", "--domain", "0,1,oo", "--p", "2", "--eps0", "1", "--format", "json"],
    ["summability", "--method", "delta:2", "--seq", "alt_sign", "--rows", "8"],
    ["summability", "--method", "cesaro", "--seq", "partial_sum(1/k^2)", "--rows", "100"],
]


def outcome_map(report):
    return {v.label: v.outcome.value for v in report}


def test_criterion_01_hierarchy_suite():
    """Every catalog sequence: zero implication violations; classic classifications reproduced; < 60 s."""
    start = time.perf_counter()
    reports = {name: hierarchy_report(catalog_lookup(name), (1, 2)) for name in CATALOG_NAMES}
    elapsed = time.perf_counter() - start
    for name, rep in reports.items():
        assert rep.violations == [], (name, rep.violations)
    h = outcome_map(reports["harmonic_partial"])
    assert h["SO"] == "holds" and h["Cauchy"] == "fails"
    w = outcome_map(reports["weighted_harmonic"])
    assert w["QC"] == "holds" and w["SO"] == "fails"
    a = outcome_map(reports["alt_sign"])
    assert a["QC"] == "fails" and a["2-QC"] == "holds"
    n = outcome_map(reports["naturals"])
    assert all(v == "fails" for v in n.values()), n
    assert elapsed < 60.0, elapsed


def test_criterion_02_telescoping_identity():
    """Δ_p x_n equals the correctly rounded sum of the p gap-1 differences, exactly."""
    for name in CATALOG_NAMES:
        s = catalog_lookup(name)
        x = s.prefix(10**4 + 5)
        for p in range(1, 6):
            dp = delta(s, p).prefix(10**4)
            d1 = delta(s, 1).prefix(10**4 + 4)
            for i in range(10**4):
                chain = [v for j in range(p) for v in (x[i + j + 1], -x[i + j])]
                assert dp[i] == math.fsum(chain), (name, p, i + 1)
            assert dp.tobytes() == (x[p : p + 10**4] - x[: 10**4]).tobytes()
            assert d1[:10**4].tobytes() == (x[1 : 10**4 + 1] - x[: 10**4]).tobytes()


def test_criterion_03_summability_oracle():
    """delta_p_method reproduces delta(s, p) bit for bit; on constants it is not regular."""
    for name in CATALOG_NAMES:
        s = catalog_lookup(name)
        for p in range(1, 6):
            out = apply_method(delta_p_method(p), s, 10**4).transformed_prefix
            assert out.tobytes() == delta(s, p).prefix(10**4).tobytes(), (name, p)
    for p in range(1, 6):
        constants = [RealSequence.constant(c) for c in (1.0, -2.5, 7.0)]
        report = regularity_spot_check(delta_p_method(p), constants)
        assert [ok for _, ok in report] == [False, False, False]


def test_criterion_04_uniformity_matches_preservation(suite_reports, suite_seconds):
    """Uniform continuity verdict agrees with some probed gap preserving p-quasi-Cauchy; x^2 on R breaks via sqrt_n."""
    for name, rep in suite_reports.items():
        some_p = any(rep.get("delta_p", p).holds for p in rep.p_list)
        assert rep.uniformity.holds or rep.uniformity.fails, name
        assert rep.uniformity.holds == some_p, (name, rep.summary())
    sq = suite_reports["x^2 on R"]
    assert sq["(c)"].holds
    for p in (1, 2):
        v = sq.get("delta_p", p)
        assert v.fails and v.params["generator"] == "sqrt_n"
        assert sq.replay("delta_p", p) >= v.epsilon
    assert suite_seconds < 300.0


def test_criterion_05_sin_inverse_witness():
    """sin(1/x) on (0,1) with eps0 = 1: a p-quasi-Cauchy input whose image is not, for p = 1, 2."""
    f = parse_function("sin(1/x)", Interval.open(0.0, 1.0))
    for p in (1, 2):
        found = adversarial_witness(f, p, 1.0)
        assert found is not None
        w, image_verdict = found
        assert pqc_tester(w.sequence, p).holds
        assert image_verdict.fails and image_verdict.witness is not None
        k = image_verdict.witness[0]
        replayed = abs(w.image(k + p) - w.image(k))
        assert replayed >= image_verdict.epsilon
        pos = np.array(w.pair_positions)
        assert (np.abs(w.image.values(pos) - w.image.values(pos - p)) >= 1.0).all()


def test_criterion_06_subsequence_extraction():
    """Bounded sequences yield a subsequence with gaps < 1e-3 from 10^6 terms; unbounded ones escape."""
    bounded = ["alt_sign", "sin_n"] + [n for n in CATALOG_NAMES if catalog_lookup(n).properties.get("bounded")]
    for name in dict.fromkeys(bounded):
        for p in (1, 2):
            sub = extract_p_quasi_cauchy_subsequence(catalog_lookup(name), p, gap_tol=1e-3, prefix=10**6)
            assert sub.check().holds, name
            assert np.ptp(sub.values) < 1e-3
            assert catalog_lookup(name).values(sub.indices).tobytes() == sub.values.tobytes()
    for name in ("naturals", "log_n"):
        with pytest.raises(UnboundedEvidence) as info:
            extract_p_quasi_cauchy_subsequence(catalog_lookup(name), 1, gap_tol=1e-3, prefix=10**6)
        s = catalog_lookup(name)
        k = info.value.index
        assert k is not None and abs(s(k) - s(1)) > 10.0


def test_criterion_07_statistical_and_lacunary():
    """Square-indicator density is exactly 1000/10^6; pow2 is lacunary, r is not; stat-QC examples."""
    sq = catalog_lookup("square_indicator")
    (count,) = deviation_counts(sq, 0.0, 0.5, [10**6])
    assert count == 1000 and count / 10**6 == 1e-3
    LacunarySchedule.pow2().validate()
    with pytest.raises(InvalidLacunarySchedule):
        LacunarySchedule.from_name("linear").validate()
    assert sqc_tester(catalog_lookup("sqrt_n")).holds
    assert sqc_tester(catalog_lookup("alt_sign")).fails


def test_criterion_08_uniform_limit_family():
    """f_m(x) = x + 1/m on [0,1] and its uniform limit x all preserve p-quasi-Cauchy at one schedule."""
    unit = Interval.closed(0.0, 1.0)
    grid = np.linspace(0.0, 1.0, 1001)
    limit = parse_function("x", unit)
    for m in (1, 2, 5, 10, 100, 1000):
        fm = parse_function(f"x + 1/{m}", unit)
        assert np.max(np.abs(fm(grid) - limit(grid))) == pytest.approx(1.0 / m, rel=1e-12)
        for p in (1, 2):
            assert preserves_mode(fm, p).holds, (m, p)
    for p in (1, 2):
        assert preserves_mode(limit, p).holds


def test_criterion_09_parser_suite():
    """Precedence ground truths, 100 seeded round trips, 10^4 fuzz inputs without a crash."""
    assert parse_sequence("1+2*3^2")(1) == 19.0
    assert parse_sequence("-2^2")(1) == -4.0
    rng = random.Random(20240531)
    for _ in range(100):
        mode = rng.choice(["sequence", "function"])
        tree = random_ast(rng, rng.randint(1, 7), "n" if mode == "sequence" else "x")
        text = pretty(tree)
        assert parse_expr(text, mode) == tree
        assert pretty(parse_expr(text, mode)) == text
    fuzz = random.Random(9)
    alphabet = "nxk0123456789.+-*/^(), sqrtlnfoabcu_$#"
    for i in range(10**4):
        text = "".join(fuzz.choice(alphabet) for _ in range(fuzz.randint(0, 1024)))
        check_total(text, "sequence" if i % 2 else "function")
    with pytest.raises(ParseError):
        parse_sequence("1 +")


def test_criterion_10_cli_determinism():
    """Each documented invocation prints identical JSON bytes on two runs with the same seed."""
    for argv in DOCUMENTED_INVOCATIONS:
        outputs = []
        for _ in range(2):
            out, err = io.StringIO(), io.StringIO()
            code = run([*argv, "--seed", "20240531"], out, err)
            assert code == 0, (argv, err.getvalue())
            outputs.append(out.getvalue().encode())
        assert outputs[0] == outputs[1], argv
        json.loads(outputs[0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
