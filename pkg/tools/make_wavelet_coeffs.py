"""Generate db8/sym8 scaling-filter coefficients by spectral factorization.

Run once; output is frozen into the package source. Uses mpmath at 60 digits
so the printed doubles are correctly rounded.
"""
import itertools

import mpmath as mp

mp.mp.dps = 60
N = 8  # vanishing moments -> 16 taps


def binomial(n, k):
    return mp.binomial(n, k)


# P(y) = sum_{k=0}^{N-1} C(N-1+k, k) y^k, roots in y
coeffs = [binomial(N - 1 + k, k) for k in range(N - 1, -1, -1)]
yroots = mp.polyroots(coeffs, maxsteps=200, extraprec=200)

# each y root maps to z-pair solving z^2 - (2 - 4y) z + 1 = 0
def zpair(y):
    b = 2 - 4 * y
    disc = mp.sqrt(b * b - 4)
    return ((b + disc) / 2, (b - disc) / 2)


groups = []  # list of (z_inside, z_outside) choices per root
for y in yroots:
    z1, z2 = zpair(y)
    inside, outside = (z1, z2) if abs(z1) < 1 else (z2, z1)
    groups.append((inside, outside))


def filter_from_choice(choice):
    # choice[i] selects inside (0) or outside (1) root of group i
    zs = [g[c] for g, c in zip(groups, choice)]
    # Q(z) with the chosen roots, real coefficients enforced at the end
    poly = [mp.mpc(1)]
    for z0 in zs:
        poly = [mp.mpc(0)] + poly
        poly = [poly[i + 1] * (-z0) + poly[i] if i < len(poly) - 1 else poly[i]
                for i in range(len(poly))]
        # rebuild properly: multiply poly by (z - z0)
    return poly


def polymul(a, b):
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def build_filter(choice):
    q = [mp.mpc(1)]
    for g, c in zip(groups, choice):
        z0 = g[c]
        q = polymul(q, [mp.mpc(1), -z0])
    # multiply by ((1+z)/2)^N
    for _ in range(N):
        q = polymul(q, [mp.mpf(1) / 2, mp.mpf(1) / 2])
    h = [z.real for z in q]
    s = sum(h)
    h = [v * mp.sqrt(2) / s for v in h]
    return h


def phase_nonlinearity(h):
    # deviation of unwrapped phase from best lag line, sampled on (0, pi)
    M = 256
    dev = mp.mpf(0)
    L = len(h) - 1
    for k in range(1, M):
        w = mp.pi * k / M
        H = sum(h[n] * mp.e ** (-1j * w * n) for n in range(len(h)))
        ph = mp.arg(H * mp.e ** (1j * w * L / 2))  # remove half-length linear phase
        # fold to principal value distance from multiples of pi
        d = abs(((ph + mp.pi / 2) % mp.pi) - mp.pi / 2)
        dev += d * d
    return dev


# db8: all inside (minimum phase)
db8 = build_filter([0] * len(groups))

# sym8: enumerate conjugate-consistent choices, minimize phase nonlinearity.
# Groups come in conjugate pairs for complex y roots; real y roots stand alone.
# Enforce conjugate pairs pick the same side so coefficients stay real.
pairs = []
used = set()
for i, y in enumerate(yroots):
    if i in used:
        continue
    partner = None
    for j in range(i + 1, len(yroots)):
        if j not in used and abs(mp.conj(y) - yroots[j]) < mp.mpf('1e-30'):
            partner = j
            break
    if partner is None:
        pairs.append((i,))
    else:
        used.add(partner)
        pairs.append((i, partner))

best = None
for bits in itertools.product([0, 1], repeat=len(pairs)):
    choice = [0] * len(groups)
    for b, idx in zip(bits, pairs):
        for i in idx:
            choice[i] = b
    h = build_filter(choice)
    score = phase_nonlinearity(h)
    if best is None or score < best[0]:
        best = (score, h)
sym8 = best[1]

for name, h in [("db8", db8), ("sym8", sym8)]:
    hs = sum(h)
    hsq = sum(v * v for v in h)
    print(name, "sum-sqrt2:", mp.nstr(hs - mp.sqrt(2), 5), "sumsq-1:", mp.nstr(hsq - 1, 5))
    for k in range(1, N):
        o = sum(h[n] * h[n + 2 * k] for n in range(len(h) - 2 * k))
        assert abs(o) < mp.mpf('1e-40'), (name, k, o)
    print("[" + ",\n ".join(repr(float(v)) for v in h) + "]")
