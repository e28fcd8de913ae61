import math

import numpy as np
import pytest

from discordlab.entanglement import Phase, ccnr, classify, is_ppt, min_pt_eigenvalue, negativity
from discordlab.states import DensityMatrix, horodecki_state, random_density, random_local_unitaries

from conftest import pt_by_loops


def family_negativity(alpha):
    # rho^T_B splits into 2x2 blocks [[alpha, 2], [2, 5 - alpha]] / 21 on {|ij>, |ji>}
    return 3 * max(0.0, math.sqrt((2 * alpha - 5) ** 2 + 16) - 5) / 42


def product_state(seed):
    ra = random_density(1, 3, 2, seed).mat
    rb = random_density(1, 2, 2, seed + 1).mat
    return DensityMatrix(3, 2, np.kron(ra, rb)), ra, rb


def test_negativity_basic(bell):
    rho, _, _ = product_state(3)
    assert negativity(rho) == 0.0
    assert is_ppt(rho)
    assert negativity(bell) == pytest.approx(0.5, abs=1e-15)
    assert not is_ppt(bell)
    assert min_pt_eigenvalue(bell) == pytest.approx(-0.5)


def test_negativity_family_against_loop_oracle():
    for alpha in np.linspace(2, 5, 13):
        rho = horodecki_state(alpha).state
        ev = np.linalg.eigvalsh(pt_by_loops(rho.mat, 3, 3))
        by_loops = (np.sum(np.abs(ev)) - 1) / 2
        assert negativity(rho) == pytest.approx(max(by_loops, 0.0), abs=1e-14)
        assert negativity(rho) == pytest.approx(family_negativity(alpha), abs=1e-14)


def test_negativity_at_four_and_a_half():
    value = negativity(horodecki_state(4.5).state)
    assert value == pytest.approx(0.04691816067802712, abs=1e-14)
    assert value == pytest.approx(3 * (math.sqrt(32) - 5) / 42, abs=1e-14)


def test_ppt_boundary():
    assert is_ppt(horodecki_state(4.0).state)
    assert not is_ppt(horodecki_state(4.0001).state)


def test_ppt_grid():
    for alpha in np.linspace(2, 5, 61):
        rho = horodecki_state(alpha).state
        assert is_ppt(rho) == (alpha <= 4.0), alpha
        neg = negativity(rho)
        assert neg >= 0
        assert (neg > 1e-10) != is_ppt(rho)


def test_ccnr_examples(bell):
    psi_a = np.array([1, 1j]) / math.sqrt(2)
    psi_b = np.array([0.6, 0, 0.8])
    pure_product = DensityMatrix(2, 3, np.kron(np.outer(psi_a, psi_a.conj()), np.outer(psi_b, psi_b.conj())))
    assert ccnr(pure_product) == pytest.approx(1.0, abs=1e-12)
    assert ccnr(bell) == pytest.approx(2.0, abs=1e-14)
    assert ccnr(DensityMatrix(3, 3, np.eye(9) / 9)) == pytest.approx(1 / 3, abs=1e-14)


def test_ccnr_products():
    for seed in range(0, 40, 2):
        rho, ra, rb = product_state(seed)
        expected = math.sqrt(np.trace(ra @ ra).real) * math.sqrt(np.trace(rb @ rb).real)
        assert abs(ccnr(rho) - expected) < 1e-10


def test_classify_examples(bell):
    assert classify(horodecki_state(4.5).state).phase is Phase.NPT_FREE
    assert classify(bell).phase is Phase.NPT_FREE
    label = classify(horodecki_state(2.5).state)
    assert label.phase is Phase.PPT_UNDETECTED
    assert label.negativity == 0.0
    assert label.ccnr == pytest.approx(20 / 21, abs=1e-12)


def test_classify_bound_entangled_window():
    # PPT and realignment-detected strictly between 3 and 4 on this family
    for alpha in (3.05, 3.5, 3.9, 4.0):
        assert classify(horodecki_state(alpha).state).phase is Phase.PPT_CCNR_DETECTED


def test_classify_local_unitary_invariance():
    rho = horodecki_state(3.7).state
    base = classify(rho)
    for seed in range(20):
        ua, ub = random_local_unitaries(3, 3, seed)
        label = classify(rho.conjugate(ua, ub))
        assert label.phase is base.phase
        assert abs(label.negativity - base.negativity) < 1e-9
        assert abs(label.ccnr - base.ccnr) < 1e-9
