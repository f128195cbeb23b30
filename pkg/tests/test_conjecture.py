import dataclasses
import random

import pytest
import sympy

from padicrec.conjecture import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    SKIPPED,
    check_failure,
    check_holds,
    replay_failure,
    scan,
    verdict,
)
from padicrec.sequence import MTRIPELL, TRIPELL, term_mod
from padicrec.series import f_series, hensel_start, hensel_zero

TIZ = (-1, 0)


@pytest.fixture(scope="module")
def tripell_scan():
    return scan(TRIPELL, (5, 250), TIZ)


@pytest.fixture(scope="module")
def mtripell_scan():
    return scan(MTRIPELL, (5, 250), TIZ)


def _by_status(verdicts):
    out = {}
    for v in verdicts:
        out.setdefault(v.status, set()).add(v.p)
    return out


def test_tripell_lists(tripell_scan):
    s = _by_status(tripell_scan)
    assert s[HOLDS] == {103, 137, 191}
    assert s[SKIPPED] == {29}
    assert s[INCONCLUSIVE] == {5, 19, 41, 151}
    assert s[FAILS] == set(sympy.primerange(5, 251)) - {5, 19, 29, 41, 103, 137, 151, 191}


def test_mtripell_lists(mtripell_scan):
    s = _by_status(mtripell_scan)
    assert s[HOLDS] == {5, 23, 41, 131, 193, 227}
    assert s[SKIPPED] == {83}
    assert s[INCONCLUSIVE] == {7}


def test_scan_order_and_threads():
    one = scan(TRIPELL, (5, 60), TIZ)
    many = scan(TRIPELL, (5, 60), TIZ, threads=3)
    assert [v.p for v in one] == sorted(v.p for v in one)
    assert [v.to_dict() for v in one] == [v.to_dict() for v in many]


def test_zero_class_matches_hensel(tripell_scan, mtripell_scan):
    # the scan's closed-form residue against an explicit Hensel lift
    fails = [v for v in tripell_scan + mtripell_scan if v.status == FAILS]
    for v in random.Random(7).sample(fails, 15):
        spec = TRIPELL if v in tripell_scan else MTRIPELL
        cert = v.certificate
        s = f_series(spec, cert.p, cert.ell, cert.N, K=6)
        z = hensel_zero(s, hensel_start(s))
        assert (cert.ell + cert.N * z.b.r) % cert.p == cert.zero_class


def test_failure_certificates_replay(tripell_scan):
    for v in tripell_scan:
        if v.status == FAILS:
            assert replay_failure(TRIPELL, v.certificate)


def test_replay_rejects_tampering(tripell_scan):
    cert = next(v.certificate for v in tripell_scan if v.status == FAILS)
    assert not replay_failure(TRIPELL, dataclasses.replace(cert, x_ell=(cert.x_ell + 1) % cert.modulus))
    assert not replay_failure(TRIPELL, dataclasses.replace(cert, zero_class=(cert.zero_class + 1) % cert.p))
    assert not replay_failure(TRIPELL, dataclasses.replace(cert, N=cert.N + 1))
    assert not replay_failure(TRIPELL, dataclasses.replace(cert, tiz=cert.tiz + (cert.zero_class,)))


def test_holds_classes_are_tiz_classes():
    # p = 103: every class with p | x_ell is -1 or 0 mod N
    from padicrec.sequence import period
    N = period(TRIPELL, 103)
    divisible = [ell for ell in range(N) if term_mod(TRIPELL, ell, 103) == 0]
    assert divisible == [0, N - 1]
    assert check_holds(TRIPELL, 103, TIZ)
    assert check_failure(TRIPELL, 103, TIZ) is None


def test_verdict_other_cases():
    v = verdict(TRIPELL, 7, TIZ)
    assert v.status == FAILS and v.witness_ell == 6 and v.N == 57
    assert verdict(MTRIPELL, 2, TIZ).status == INCONCLUSIVE
    assert verdict(TRIPELL, 3, TIZ).status == SKIPPED
    # a wrong TIZ set makes the holds criterion impossible
    assert not check_holds(TRIPELL, 103, (0,))
