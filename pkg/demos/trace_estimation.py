"""Estimate the normalized trace of a unitary from control-qubit readout.

The circuit encodes Tr U / 2^n in the x and y expectations of the control
qubit, scaled by the polarization alpha.  This script shows the estimate
converging as the shot count grows, and the 1/alpha noise penalty of a
weakly polarized control.
"""

import numpy as np

from dqc1 import ControlQubit, Dqc1Instance, SeededRng, estimate_trace, haar_unitary

SEED = 7

u = haar_unitary(8, SeededRng(SEED, 0))
exact = complex(np.trace(u)) / 8
print("register: n = 3 qubits, Haar-random U")
print(f"exact normalized trace: {exact.real:+.6f} {exact.imag:+.6f}i")
print()

print("convergence at full polarization (alpha = 1):")
print(f"{'shots':>10}  {'estimate':>22}  {'abs error':>10}")
inst = Dqc1Instance(n=3, unitary=u, control=ControlQubit.from_alpha(1.0))
for k in range(2, 7):
    shots = 10**k
    est = estimate_trace(inst, shots, SeededRng(SEED, k))
    err = abs(est.trace_estimate - exact)
    val = f"{est.trace_estimate.real:+.5f} {est.trace_estimate.imag:+.5f}i"
    print(f"{shots:>10}  {val:>22}  {err:>10.5f}")

print()
print("noise penalty of a weak control at 10^4 shots:")
print(f"{'alpha':>6}  {'abs error':>10}  {'stderr x':>9}")
for alpha in (1.0, 0.5, 0.2, 0.1):
    inst = Dqc1Instance(n=3, unitary=u, control=ControlQubit.from_alpha(alpha))
    est = estimate_trace(inst, 10**4, SeededRng(SEED, 20))
    err = abs(est.trace_estimate - exact)
    print(f"{alpha:>6.2f}  {err:>10.5f}  {est.stderr_x / alpha:>9.5f}")

print()
print("the error grows like 1/(alpha sqrt(shots)): halving alpha costs")
print("four times the shots for the same accuracy")
