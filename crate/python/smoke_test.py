"""Smoke test for the tomita Python bindings.

Build and install first:
    pip install maturin
    pip install --no-build-isolation ./crates/python
"""

import cmath
import math

import tomita


def close(a, b, tol):
    return abs(a - b) <= tol


def max_entry_diff(a, b):
    return max(abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def check_modular():
    algebra = tomita.Algebra.local_qubit()
    assert algebra.dim == 4 and len(algebra) == 4
    assert algebra.is_von_neumann()
    data = tomita.tomita(algebra, tomita.bell_psi_plus())
    assert max_entry_diff(data.j, tomita.j_ab()) <= 1e-10
    assert all(r <= 1e-9 for r in data.verify().values())
    phi = tomita.tomita(algebra, tomita.bell_phi_plus())
    identity = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    assert max_entry_diff(phi.delta, identity) <= 1e-10


def check_concurrence():
    a, b = 0.6, 0.8j
    psi = [a, 0, 0, b]
    assert close(tomita.concurrence_pure(psi), 2 * abs(a * b), 1e-12)
    rho = [[x * y.conjugate() for y in map(complex, psi)] for x in map(complex, psi)]
    assert close(tomita.wootters_concurrence(rho), 0.96, 1e-9)
    assert close(tomita.modular_concurrence(tomita.bell_psi_plus(), tomita.j_ab()), 1.0, 1e-12)
    _, best = tomita.maximize_chsh(rho)
    assert best <= tomita.max_violation_from_concurrence(0.96) + 1e-9
    try:
        tomita.concurrence_pure([1, 1, 0, 0])
    except tomita.TomitaError:
        pass
    else:
        raise AssertionError("unnormalized state accepted")


def check_susy():
    model = tomita.SusyModel(8)
    residuals = model.verify_intertwining()
    assert residuals["j_qa_j_equals_qb"] <= 1e-12
    s = 1 / math.sqrt(2)
    assert close(model.concurrence(3, 2, s, s), 1.0, 1e-12)


def check_detectors():
    for r, hh in [(1.0, 0.25), (0.5, 0.1)]:
        state = tomita.evolve(r, hh, 16)
        expected = tomita.udw_concurrence(r, hh)
        assert close(state.concurrence(), expected, 1e-6)
        assert close(state.reduced_concurrence(), expected, 1e-6)
        assert not state.warnings
    assert tomita.evolve(1.0, 2.0, 4).warnings
    assert close(tomita.udw_concurrence(1.0, 0.25), math.exp(-0.5), 1e-12)
    best = tomita.chsh_udw(1.0, 0.0, (0.0, -math.pi / 4, math.pi / 2, math.pi / 4))
    assert close(best, 2 * math.sqrt(2), 1e-12)
    fa = tomita.GaussianTestFunction(0.2, x0=(-3.0, 0.0, 0.0))
    fb = tomita.GaussianTestFunction(0.2, x0=(3.0, 0.0, 0.0))
    overlap = tomita.inner_product(fa, fb)
    assert abs(overlap.imag) <= 1e-8
    assert close(tomita.inner_product(fb, fa), overlap.conjugate(), 1e-12 * abs(overlap))


def main():
    for check in (check_modular, check_concurrence, check_susy, check_detectors):
        check()
        print(f"ok {check.__name__}")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
