"""
Statevector simulation basics
=============================

Build small quantum states, apply gates through the strided kernels, and
read out parity expectations. Amplitudes are indexed little-endian: bit q
of the basis index is the state of qubit q.
"""
import numpy as np

from windqnn.statevector import (
    HADAMARD,
    apply_1q,
    apply_cx,
    expect_z_all,
    expect_z_single,
    new_zero_state,
    phase_matrix,
    ry_matrix,
)

# Two qubits start in |00>: amplitude 1 at index 0.
state = new_zero_state(2)
print("initial amplitudes:", state.amplitudes)

# A Hadamard on qubit 0 splits the amplitude between indices 0 and 1.
apply_1q(state, HADAMARD, 0)
print("after H on q0:    ", np.round(state.amplitudes, 6))

# CX with control q0 copies that superposition onto qubit 1: the Bell state
# (|00> + |11>) / sqrt(2), nonzero at indices 0 and 3.
apply_cx(state, 0, 1)
print("after CX q0,q1:   ", np.round(state.amplitudes, 6))
print("norm:", state.norm())

# Parity readout. Both Bell branches have even parity, so <Z x Z> is +1,
# while each single qubit alone is maximally mixed and reads 0.
print("<ZZ> =", expect_z_all(state))
print("<Z_0> =", expect_z_single(state, 0))

# Rotations: RY(pi) flips |0> to |1>; a phase gate leaves probabilities
# unchanged but matters once interference happens.
flip = new_zero_state(1)
apply_1q(flip, ry_matrix(np.pi), 0)
print("RY(pi)|0> ->", np.round(flip.amplitudes, 6), " <Z> =", expect_z_all(flip))

phased = new_zero_state(1)
apply_1q(phased, HADAMARD, 0)
apply_1q(phased, phase_matrix(np.pi / 2), 0)
apply_1q(phased, HADAMARD, 0)
print("H P(pi/2) H |0> ->", np.round(phased.amplitudes, 6))
