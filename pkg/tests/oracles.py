"""Independent reference computations used to check the package.

Nothing here imports the code under test; every quantity is recomputed from
the raw scenario numbers.
"""

from fractions import Fraction


def slot_fields(k, s, p_c, p_w, p_av):
    """(b, p, r, f, y) for decision index ``k`` (0 delay, 1 cellular, i WiFi i)."""
    if k == 0:
        b, p, r = 0, 0.0, 1
    elif k == 1:
        b, p, r = s[0], p_c, 0
    else:
        b, p, r = s[k - 1], p_w, 1
    return b, p, r, -r, p - p_av


def score(k, Q, Z, s, V, p_c, p_w, p_av):
    b, _, _, f, y = slot_fields(k, s, p_c, p_w, p_av)
    return V * f - Q * b + Z * y


def exhaustive_argmin(Q, Z, s, V, p_c, p_w, p_av):
    """Index of the smallest score; the first index wins exact ties."""
    scores = [score(k, Q, Z, s, V, p_c, p_w, p_av) for k in range(len(s) + 1)]
    return min(range(len(scores)), key=scores.__getitem__)


def one_hot_vectors(n):
    """Every 0/1 vector of length n with at most one set bit, by brute force."""
    out = []
    for mask in range(2**n):
        bits = tuple((mask >> i) & 1 for i in range(n))
        if sum(bits) <= 1:
            out.append(bits)
    return out


def exact_mean(mapping):
    return sum(Fraction(str(v)) * Fraction(str(p)) for v, p in mapping.items())


def simulate_reference(arrivals, S, policy_index, q0=0, z0=0.0, p_c=1.15, p_w=1.1, p_av=0.8):
    """Straight-line queue recursion over given sample paths.

    ``policy_index(Q, Z, s)`` returns a decision index.  Returns the list of
    (Q, Z) seen at the start of each slot plus the final pair.
    """
    Q, Z = q0, z0
    seen = []
    for a, s in zip(arrivals, S):
        seen.append((Q, Z))
        k = policy_index(Q, Z, s)
        b, _, _, _, y = slot_fields(k, s, p_c, p_w, p_av)
        Q = max(Q - b, 0) + a
        Z = max(Z + y, 0.0)
    seen.append((Q, Z))
    return seen
