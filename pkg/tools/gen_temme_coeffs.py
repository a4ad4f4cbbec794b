"""Regenerate ``src/underlay/_temme_coeffs.py``.

Taylor coefficients (in eta) of the correction terms c_k(eta) of Temme's
uniform asymptotic expansion of Q(a, x), computed in exact rational
arithmetic:

    c_0 = 1/(lam - 1) - 1/eta
    c_k = (1/eta) c_{k-1}'(eta) + (-1)^k g_k / (lam - 1)

with eta^2 / 2 = lam - 1 - ln(lam).  The constants g_k are fixed by requiring
the 1/eta pole to cancel; they come out as the Stirling coefficients of
Gamma*(a), which are emitted as well.

    python tools/gen_temme_coeffs.py > src/underlay/_temme_coeffs.py
"""
from fractions import Fraction

N_BASE = 42
N_TERMS = 12


def _mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _inv(a, n):
    out = [Fraction(0)] * n
    out[0] = 1 / a[0]
    for k in range(1, n):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, k + 1)) / a[0]
    return out


def _sqrt_unit(a, n):
    out = [Fraction(0)] * n
    out[0] = Fraction(1)
    for k in range(1, n):
        out[k] = (a[k] - sum(out[j] * out[k - j] for j in range(1, k))) / 2
    return out


def _compose(f, g, n):
    out = [Fraction(0)] * n
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for k in range(n):
        if k:
            power = _mul(power, g, n)
        for i in range(n):
            out[i] += f[k] * power[i]
    return out


def coefficients(n=N_BASE, n_terms=N_TERMS):
    # eta = u * h(u) with u = lam - 1 and h(u)^2 = sum (-1)^m 2 u^m / (m + 2)
    h2 = [Fraction((-1) ** m * 2, m + 2) for m in range(n)]
    h_inv = _inv(_sqrt_unit(h2, n), n)
    u = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 2)
    for _ in range(n):
        u = [Fraction(0)] + _compose(h_inv, u, n)[: n - 1]
    w = _inv(u[1:] + [Fraction(0)], n)  # 1/u = w / eta

    cs = [[w[i + 1] for i in range(n - 1)]]
    stirling = [Fraction(1)]
    for k in range(1, n_terms):
        prev = cs[-1]
        g_k = -((-1) ** k) * prev[1] / w[0]
        stirling.append(g_k)
        m = len(prev) - 2
        cs.append([(i + 2) * prev[i + 2] + (-1) ** k * g_k * w[i + 1] for i in range(m)])
    return cs, stirling


def main():
    cs, stirling = coefficients()
    print('"""Generated by tools/gen_temme_coeffs.py; do not edit."""')
    print()
    print("# Stirling coefficients: Gamma*(a) ~ sum_k STIRLING[k] / a**k")
    print("STIRLING = (")
    for g in stirling:
        print(f"    {float(g)!r},")
    print(")")
    print()
    print("# TEMME[k][n]: coefficient of eta**n in c_k(eta)")
    print("TEMME = (")
    for row in cs:
        print("    (")
        for c in row:
            print(f"        {float(c)!r},")
        print("    ),")
    print(")")


if __name__ == "__main__":
    main()
