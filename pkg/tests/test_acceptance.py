"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary and printed directly when this file is run as a script.
"""
import math
import time
from fractions import Fraction as F

import pytest

from pnverify.geomcheck import MUTATIONS, make_context, run_suite, suite_explicit_formula
from pnverify.hermcat import build_space
from pnverify.minimality import is_phi_minimal, nogo_report, witness_is_valid
from pnverify.repforge import minimality_rep, rep_for_space
from pnverify.rootsys import combination, weight_from_labels
from pnverify.symring import ring_constants, verify_eiii, verify_evii
from acceptance_log import record

TOL = 1e-9
FAMILIES = [("AIII", 5, 2), ("BDI", 5, None), ("BDI", 6, None), ("DIII", 5, None), ("CI", 3, None)]


def test_criterion_1_exceptional_nonexistence():
    t0 = time.perf_counter()
    e6 = nogo_report(build_space("EIII"))
    t_e6 = time.perf_counter() - t0
    e7 = nogo_report(build_space("EVII"))
    s6, s7 = build_space("EIII").root_system, build_space("EVII").root_system
    got6 = {weight_from_labels(s.labels, s6) for s in e6.nontrivial}
    got7 = {weight_from_labels(s.labels, s7) for s in e7.nontrivial}
    ok = (t_e6 < 10
          and got6 == {combination(s6, [], F(2, 3)), combination(s6, [1], F(1, 3))}
          and got7 == {combination(s7, [1], F(1, 2))}
          and all(witness_is_valid(s.weight, s.witness, build_space("EIII")) for s in e6.nontrivial)
          and all(witness_is_valid(s.weight, s.witness, build_space("EVII")) for s in e7.nontrivial)
          and e6.verdict == e7.verdict == "none exist")
    record(1, "E6/E7 nonexistence", ok, f"e6 search {t_e6:.2f}s, survivors {len(got6)}+{len(got7)}")
    assert ok


def _minimality_table():
    rows = []
    for n in range(2, 9):
        for k in range(1, n):
            space = build_space("AIII", n, k)
            v = is_phi_minimal(rep_for_space(space), space)
            rows.append((space.tag, v.is_minimal and v.lambda_im == F(n - k, n)))
    for n in range(3, 9):
        space = build_space("BDI", n)
        fund = is_phi_minimal(rep_for_space(space, "fundamental"), space)
        spin = is_phi_minimal(minimality_rep(space, "spin"), space)
        rows.append((space.tag + " fundamental", not fund.is_minimal))
        rows.append((space.tag + " spin", spin.is_minimal and spin.lambda_im == F(1, 2)))
    for tag, lo in (("DIII", 3), ("CI", 1)):
        for n in range(lo, 9):
            space = build_space(tag, n)
            v = is_phi_minimal(rep_for_space(space), space)
            rows.append((space.tag, v.is_minimal and v.lambda_im == F(1, 2)))
    return rows


def test_criterion_2_minimality_table():
    rows = _minimality_table()
    bad = [name for name, ok in rows if not ok]
    record(2, "minimality table n <= 8", not bad, f"{len(rows)} verdicts" + (f", wrong: {bad}" if bad else ""))
    assert not bad


def _criterion_3_instances():
    out = [("AIII", n, k) for n in range(2, 7) for k in range(1, n)]
    out += [("BDI", n, None) for n in range(3, 11)]
    out += [("DIII", n, None) for n in range(3, 7)]
    out += [("CI", n, None) for n in range(1, 6)]
    return out


def test_criterion_3_explicit_formula():
    t0 = time.perf_counter()
    worst, failures, levels = 0.0, [], 0
    for tag, n, k in _criterion_3_instances():
        ctx = make_context(build_space(tag, n, k))
        rep = suite_explicit_formula(ctx, trials=100, tol=TOL, seed=1000 + n, rmax=4)
        levels += ctx.n_levels
        worst = max(worst, rep.max_residual)
        if not rep.passed:
            failures.append(rep.space)
    elapsed = time.perf_counter() - t0
    ok = not failures and worst <= TOL and elapsed < 300
    record(3, "explicit formula on every chain level", ok,
           f"{levels} levels x 100 pairs, max residual {worst:.1e}, {elapsed:.0f}s"
           + (f", failing {failures}" if failures else ""))
    assert ok


def _family_suite(name, trials, seed):
    worst, bad = 0.0, []
    for tag, n, k in FAMILIES:
        rep = run_suite(name, make_context(build_space(tag, n, k)), trials=trials, tol=TOL, seed=seed)
        worst = max(worst, rep.max_residual)
        if not rep.passed:
            bad.append(rep.space)
    return worst, bad


def test_criterion_4_quadratic_relation():
    worst, bad = _family_suite("quadratic", 100, 4)
    ok = not bad and worst <= TOL
    record(4, "quadratic relation and [mu_k, A_k] = 0", ok, f"max residual {worst:.1e}")
    assert ok


def test_criterion_5_slice_formulas():
    worst, bad = _family_suite("slice", 50, 5)
    eiii, evii = ring_constants(build_space("EIII")), ring_constants(build_space("EVII"))
    exact = (eiii.c == (F(-1), F(-1)) and eiii.rho_norm2 == F(-4, 3) and evii.c == (F(-1),) * 3)
    ok = not bad and worst <= TOL and exact
    record(5, "slice closed forms (5x5 grid + 50 random)", ok,
           f"max residual {worst:.1e}, EIII c={[str(c) for c in eiii.c]} (rho,rho)={eiii.rho_norm2}")
    assert ok


def test_criterion_6_eiii_symbolic():
    cert = verify_eiii()
    keys = ("p3_relation", "dN_p1_eq_minus_dp2", "dN_p2_eq_two_thirds_d")
    ok = all(cert.identities[k] for k in keys)
    record(6, "EIII exact identities", ok, ", ".join(keys))
    assert ok


def test_criterion_7_evii_nonmembership():
    cert = verify_evii()
    m = cert.membership
    ok = cert.passed and not m.is_member and m.pairing != 0 and cert.extra["certificate_valid"]
    record(7, "EVII I11 outside degree-3 span of {1, I10, I20}", ok,
           f"separating functional value {m.pairing}")
    assert ok


def test_criterion_8_spectrum():
    worst, bad = _family_suite("spectrum", 50, 8)
    ok = not bad and worst <= TOL
    record(8, "Nijenhuis spectrum vs slice", ok, f"max residual {worst:.1e}")
    assert ok


@pytest.mark.parametrize("mutation", MUTATIONS)
def test_criterion_9_mutations(mutation):
    space = build_space("CI", 3)
    failing = []
    for suite in ("explicit-formula", "basic-forms", "quadratic", "slice", "kphi", "spectrum"):
        rep = run_suite(suite, make_context(space, mutate=[mutation]), trials=20, tol=TOL, seed=9)
        if not rep.passed and rep.worst_entry.residual >= 1e-2:
            failing.append(f"{suite} {rep.worst_entry.residual:.2f}")
    ok = bool(failing)
    record(9, f"mutation {mutation} detected", ok, "; ".join(failing) or "no suite failed")
    assert ok


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
