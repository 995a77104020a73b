#!/usr/bin/env python3
"""Generate the base-2 digital net direction-number table (data/direction_numbers.txt).

Rows: dimension, polynomial degree s, interior-coefficient value a, then s initial
direction integers m_1..m_s (odd, m_i < 2^i). Dimension 1 uses the identity
generating matrix and has no table row. Low dimensions carry standard published
initial values; higher dimensions use deterministically seeded odd initializers.
"""
import sys

def gf2_mulmod(a, b, p, s):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> s:
            a ^= p
    return r

def gf2_powmod(a, e, p, s):
    r = 1
    while e:
        if e & 1:
            r = gf2_mulmod(r, a, p, s)
        a = gf2_mulmod(a, a, p, s)
        e >>= 1
    return r

def is_irreducible(p, s):
    # x^(2^s) == x mod p, and gcd-style check via x^(2^(s/q)) != x for prime divisors q
    x = 0b10
    if gf2_powmod(x, 1 << s, p, s) != x:
        return False
    for q in prime_divisors(s):
        t = gf2_powmod(x, 1 << (s // q), p, s)
        if t == x:
            return False
    return True

def prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out

def poly_order(p, s):
    # multiplicative order of x modulo p; primitive iff order == 2^s - 1
    n = (1 << s) - 1
    if gf2_powmod(0b10, n, p, s) != 1:
        return 0
    for q in prime_divisors(n):
        if gf2_powmod(0b10, n // q, p, s) == 1:
            return 0
    return n

def primitive_polys_of_degree(s):
    """Primitive polynomials of degree s, ascending by interior-coefficient value a."""
    if s == 1:
        return [0]  # x + 1
    out = []
    for a in range(1 << (s - 1)):
        # poly = x^s + (interior bits) + 1
        p = (1 << s) | (a << 1) | 1
        if is_irreducible(p, s) and poly_order(p, s):
            out.append(a)
    return out

# Published initial direction numbers for dimensions 2..10.
KNOWN = {
    2:  (1, 0, [1]),
    3:  (2, 1, [1, 3]),
    4:  (3, 1, [1, 3, 1]),
    5:  (3, 2, [1, 1, 1]),
    6:  (4, 1, [1, 1, 3, 3]),
    7:  (4, 4, [1, 3, 5, 13]),
    8:  (5, 2, [1, 1, 5, 5, 17]),
    9:  (5, 4, [1, 1, 5, 5, 5]),
    10: (5, 7, [1, 1, 7, 11, 19]),
}

def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)

def main():
    max_dim = 64
    # assign (degree, a) pairs in ascending degree then ascending a
    assignments = []
    s = 1
    while len(assignments) < max_dim - 1:
        for a in primitive_polys_of_degree(s):
            assignments.append((s, a))
        s += 1
    rows = []
    state = 0x5EED_D1CE
    for dim in range(2, max_dim + 1):
        s, a = assignments[dim - 2]
        if dim in KNOWN:
            ks, ka, m = KNOWN[dim]
            assert (ks, ka) == (s, a), (dim, s, a, ks, ka)
        else:
            m = []
            for i in range(1, s + 1):
                state = splitmix64(state + dim * 131 + i)
                m.append((state % (1 << i)) | 1)  # odd, < 2^i
        rows.append((dim, s, a, m))
    with open(sys.argv[1] if len(sys.argv) > 1 else "data/direction_numbers.txt", "w") as f:
        f.write("# dimension  degree  a  m_1..m_s\n")
        for dim, s, a, m in rows:
            f.write(f"{dim} {s} {a} " + " ".join(str(v) for v in m) + "\n")

if __name__ == "__main__":
    main()
