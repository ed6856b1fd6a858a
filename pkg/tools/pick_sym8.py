import itertools
import mpmath as mp
exec(open('/root/pkg/tools/make_wavelet_coeffs.py').read().split('best = None')[0])

def phase_dev(h):
    # unwrapped phase over (0, pi), residual sup-norm after removing linear fit
    M = 512
    ws, phs = [], []
    prev = mp.mpf(0)
    acc = mp.mpf(0)
    for k in range(1, M):
        w = (mp.pi - mp.mpf('0.01')) * k / M
        H = sum(h[n] * mp.e ** (-1j * w * n) for n in range(len(h)))
        p = mp.arg(H)
        if k > 1:
            d = p - prev
            while d > mp.pi:
                d -= 2 * mp.pi
            while d < -mp.pi:
                d += 2 * mp.pi
            acc += d
        prev = p
        ws.append(w)
        phs.append(acc)
    n = len(ws)
    sw = sum(ws); swp = sum(w * p for w, p in zip(ws, phs)); sww = sum(w * w for w in ws); sp = sum(phs)
    slope = (n * swp - sw * sp) / (n * sww - sw * sw)
    inter = (sp - slope * sw) / n
    return max(abs(p - slope * w - inter) for w, p in zip(ws, phs))

best = None
for bits in itertools.product([0, 1], repeat=len(pairs)):
    choice = [0] * len(groups)
    for b, idx in zip(bits, pairs):
        for i in idx:
            choice[i] = b
    h = build_filter(choice)
    score = phase_dev(h)
    if best is None or score < best[0]:
        best = (score, h, bits)
score, sym8, bits = best
print("bits", bits, "dev", mp.nstr(score, 4))
print("[" + ",\n ".join(repr(float(v)) for v in sym8) + "]")
