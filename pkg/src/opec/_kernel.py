"""Compiled slot loop for the drift-plus-penalty policy.

Mirrors the arithmetic of the pure-Python loop in :mod:`opec.simulator`
operation for operation, so both produce bit-identical metrics.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

# accumulator slots
SUM_Q, SUM_R, SUM_B, SUM_A, N_CELL, N_WIFI, SERVED = range(7)
N_ACC = 7


def _opec_chunk(a, S, V, p_c, p_w, p_av, Q, Z, acc):
    T = S.shape[0]
    n = S.shape[1]
    y_delay = 0.0 - p_av
    y_cell = p_c - p_av
    y_wifi = p_w - p_av
    for t in range(T):
        # delay is always the first candidate; its score beats the +inf start
        best = 0
        value = V * -1 - Q * 0 + Z * y_delay
        tmp = V * 0 - Q * S[t, 0] + Z * y_cell
        if tmp < value:
            value = tmp
            best = 1
        for i in range(1, n):
            tmp = V * -1 - Q * S[t, i] + Z * y_wifi
            if tmp < value:
                value = tmp
                best = i + 1

        if best == 0:
            b = 0
            y = y_delay
            r = 1
        elif best == 1:
            b = S[t, 0]
            y = y_cell
            r = 0
            acc[N_CELL] += 1
        else:
            b = S[t, best - 1]
            y = y_wifi
            r = 1
            acc[N_WIFI] += 1

        acc[SUM_Q] += Q
        acc[SUM_R] += r
        acc[SUM_B] += b
        acc[SUM_A] += a[t]
        served = Q if Q < b else b
        acc[SERVED] += served

        rest = Q - b
        if rest < 0:
            rest = 0
        Q = rest + a[t]
        z = Z + y
        Z = z if z > 0.0 else 0.0
    return Q, Z


if njit is not None:
    opec_chunk = njit(cache=True, nogil=True)(_opec_chunk)
else:  # pragma: no cover
    opec_chunk = None


def available() -> bool:
    return opec_chunk is not None


def new_accumulators():
    return np.zeros(N_ACC, dtype=np.int64)
