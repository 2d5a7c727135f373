"""Smoke test for the pygurlab extension module.

Build and run from the repository root:

    PYO3_BUILD_EXTENSION_MODULE=1 cargo build --release -p gurlab-py
    cp target/release/libpygurlab.so python/pygurlab.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pygurlab as g


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


sx, sy, sz = g.pauli()
assert sx.dim == 2 and sorted(sx.eigenvalues) == [-1.0, 1.0]
assert "gur_full" in g.inequalities()

# qubit counterexample to the classical exponential relation
st = g.State.pure([1 / math.sqrt(2), -1 / math.sqrt(2)])
r = g.classical_ur(st, sx, sy)
close(r.margin, -0.146755382905, 1e-10)
assert not r.satisfied
assert g.quantum_ur(st, sx, sy).satisfied
assert g.evaluate("gur_full", st, sx, sy, s=0.3 + 0.1j, t=-0.2).satisfied

k = g.cumulants(g.psi1(1.0, 0.5), sz)
close(k["k2"], 1 - k["k1"] ** 2, 1e-14)
close(g.first_order_identity(st, sx, sy, 0.4 - 0.3j, 0.2j), 0.0, 1e-12)
close(g.cgf(st, sx, 0.3).real, -0.3, 1e-14)
close(g.cgf(st, sz, 0.3).real, math.log(math.cosh(0.3)), 1e-14)

# BCH truncation approaches the exact logarithm
z = g.z_exact(sx, sy, 0.05, 0.05)
b = g.bch_sum(sx, sy, 0.05, 0.05, 5)
assert max(abs(z[i][j] - b[i][j]) for i in range(2) for j in range(2)) < 1e-8

lx, ly, _ = g.angular_momenta_l1()
close(g.schrodinger(g.psi2(), lx, ly).rhs, 0.0, 1e-12)
assert g.exp_ratio_ur(g.psi2(), lx, ly, 0.3, 0.3).rhs > 1.0

close(g.collective_variance_sum(g.psi3()), 0.0, 1e-12)
w = g.werner(0.5)
assert not w.is_pure and w.dim == 4
theta, k3 = g.max_abs_kappa3(1.0)
close(k3, 64 * math.sqrt(6) / 9, 1e-6)
close(g.skewness_nonlocality_threshold(), 2 ** (-1 / 3) - 1 / 3, 1e-9)

scan = g.sweep("classical_ur", ("theta", 0.0, math.pi, 40), ("phi", 0.0, 2 * math.pi, 40))
assert len(scan) == 1600 and scan.shape == (40, 40)
assert len(scan.violation_regions()) == 2

scan = g.sweep_instance("gur_full", st, sx, sy, ("s", -1.0, 1.0, 9), fix={"t": 0.5})
assert not scan.violation_cells

with open(os.path.join(os.path.dirname(__file__), "..", "problems", "example1_violation.json")) as f:
    state, obs, params = g.load_problem(f.read())
close(g.classical_ur(state, obs["X"], obs["Y"]).margin, -0.146755382905, 1e-10)

ok, suites = g.selftest(n=50, seed=7)
assert ok and len(suites) == 4
ok, suites = g.selftest(n=50, seed=7, fault="z11-sign")
assert not ok and [s[0] for s in suites if s[1] < s[2]] == ["taylor_oracle"]

try:
    g.Observable([[1, 1j], [1j, 0]])
except ValueError as e:
    assert "Hermitian" in str(e)
else:
    raise AssertionError("non-Hermitian matrix accepted")

print("python smoke test ok")
