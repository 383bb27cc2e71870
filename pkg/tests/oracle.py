"""Naive reference computations with Fraction and explicit loops.

Only left-invariant structures on Lie groups (trivial isotropy). Everything is
computed from the raw bracket table and re-derived from first principles, so
none of the package's tensor machinery is involved.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def fr(x) -> Fraction:
    return Fraction(str(x))


class Oracle:
    def __init__(self, obj: dict):
        names = obj["basis"]
        n = len(names)
        self.n = n
        self.names = names
        idx = {s: i for i, s in enumerate(names)}
        c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for b in obj.get("brackets", []):
            i, j = idx[b["x"]], idx[b["y"]]
            for k, v in b["value"].items():
                c[idx[k]][i][j] += fr(v)
                c[idx[k]][j][i] -= fr(v)
        self.c = c
        if obj.get("metric", "identity") == "identity":
            self.G = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        else:
            self.G = [[fr(x) for x in row] for row in obj["metric"]]
        self.J = [[fr(x) for x in row] for row in obj["J"]]
        self.Ginv = _inverse(self.G)
        self._build()

    # helpers on vectors given by coordinate lists
    def br(self, x, y):
        n = self.n
        return [sum((self.c[k][i][j] * x[i] * y[j] for i in range(n) for j in range(n) if x[i] and y[j]), Fraction(0)) for k in range(n)]

    def g(self, x, y):
        n = self.n
        return sum((self.G[i][j] * x[i] * y[j] for i in range(n) for j in range(n) if x[i] and y[j]), Fraction(0))

    def Jv(self, x):
        return [sum(self.J[k][i] * x[i] for i in range(self.n)) for k in range(self.n)]

    def e(self, i):
        return [Fraction(int(k == i)) for k in range(self.n)]

    def sharp(self, form):
        """Vector v with g(v, ·) = form (given as a list of values on the basis)."""
        return [sum(self.Ginv[k][i] * form[i] for i in range(self.n)) for k in range(self.n)]

    def _build(self):
        n = self.n
        E = [self.e(i) for i in range(n)]
        # Koszul formula for left-invariant fields
        self.lc = [[self.sharp([
            (self.g(self.br(E[x], E[y]), E[z]) - self.g(self.br(E[y], E[z]), E[x]) + self.g(self.br(E[z], E[x]), E[y])) / 2
            for z in range(n)]) for y in range(n)] for x in range(n)]  # lc[x][y] = ∇_x y

        def omega(u, v):
            return self.g(self.Jv(u), v)

        def domega(u, v, w):
            return -omega(self.br(u, v), w) + omega(self.br(u, w), v) - omega(self.br(v, w), u)

        H = [[[domega(self.Jv(E[a]), self.Jv(E[b]), self.Jv(E[d])) for d in range(n)] for b in range(n)] for a in range(n)]
        # pick the sign of the 3-form that makes the connection J-parallel
        found = []
        for s in (Fraction(1, 2), Fraction(-1, 2)):
            cand = [[[self.lc[x][y][k] + s * self.sharp(H[x][y])[k] for k in range(n)] for y in range(n)] for x in range(n)]
            if self._parallel_J(cand):
                found.append((s, cand))
        h_zero = all(v == 0 for r in H for row in r for v in row)
        assert len(found) == 1 or (len(found) == 2 and h_zero), "no unique J-parallel sign"
        self.sign, self.nabla = found[0]
        self.H = H
        self.T = [[[self.nabla[x][y][k] - self.nabla[y][x][k] - self.br(E[x], E[y])[k] for k in range(n)]
                   for y in range(n)] for x in range(n)]
        assert self._metric(self.nabla)
        for x, y, z in product(range(n), repeat=3):
            assert self.g(self.T[x][y], E[z]) == -self.g(self.T[x][z], E[y])

    def D(self, conn, x, v):
        """conn(x) applied to the vector v, for a basis index x."""
        return [sum(conn[x][y][k] * v[y] for y in range(self.n)) for k in range(self.n)]

    def Dv(self, conn, u, v):
        return [sum(u[x] * self.D(conn, x, v)[k] for x in range(self.n) if u[x]) for k in range(self.n)]

    def _parallel_J(self, conn):
        n = self.n
        for x, y in product(range(n), repeat=2):
            a = self.D(conn, x, self.Jv(self.e(y)))
            b = self.Jv(self.D(conn, x, self.e(y)))
            if a != b:
                return False
        return True

    def _metric(self, conn):
        n = self.n
        return all(self.g(self.D(conn, x, self.e(y)), self.e(z)) + self.g(self.e(y), self.D(conn, x, self.e(z))) == 0
                   for x, y, z in product(range(n), repeat=3))

    def curvature(self):
        """R[x][y][z] = ∇_[x,y] z − ∇_x ∇_y z + ∇_y ∇_x z (the package's sign)."""
        n = self.n
        E = [self.e(i) for i in range(n)]
        out = [[[None] * n for _ in range(n)] for _ in range(n)]
        for x, y, z in product(range(n), repeat=3):
            a = self.Dv(self.nabla, self.br(E[x], E[y]), E[z])
            b = self.D(self.nabla, x, self.D(self.nabla, y, E[z]))
            c = self.D(self.nabla, y, self.D(self.nabla, x, E[z]))
            out[x][y][z] = [a[k] - b[k] + c[k] for k in range(n)]
        return out

    def nabla_T(self):
        """(∇_x T)(y, z), returned as [x][y][z] -> vector."""
        n = self.n
        T = self.T

        def Tv(u, v):
            return [sum(u[a] * v[b] * T[a][b][k] for a in range(n) for b in range(n) if u[a] and v[b]) for k in range(n)]

        out = {}
        for x, y, z in product(range(n), repeat=3):
            E = self.e
            t = self.D(self.nabla, x, T[y][z])
            t1 = Tv(self.D(self.nabla, x, E(y)), E(z))
            t2 = Tv(E(y), self.D(self.nabla, x, E(z)))
            out[x, y, z] = [t[k] - t1[k] - t2[k] for k in range(n)]
        return out

    def nabla_R(self):
        n = self.n
        R = self.curvature()

        def Rv(u, v, w):
            return [sum(u[a] * v[b] * w[d] * R[a][b][d][k] for a in range(n) for b in range(n) for d in range(n)
                        if u[a] and v[b] and w[d]) for k in range(n)]

        out = {}
        E = self.e
        for x, a, b, d in product(range(n), repeat=4):
            t = self.D(self.nabla, x, R[a][b][d])
            s1 = Rv(self.D(self.nabla, x, E(a)), E(b), E(d))
            s2 = Rv(E(a), self.D(self.nabla, x, E(b)), E(d))
            s3 = Rv(E(a), E(b), self.D(self.nabla, x, E(d)))
            out[x, a, b, d] = [t[k] - s1[k] - s2[k] - s3[k] for k in range(n)]
        return out

    def torsion_form(self):
        """H(x,y,z) = g(T(x,y), z)."""
        n = self.n
        return {(x, y, z): self.g(self.T[x][y], self.e(z)) for x, y, z in product(range(n), repeat=3)}

    def d_form3(self, H):
        """Chevalley–Eilenberg differential of an invariant 3-form."""
        n = self.n
        E = self.e

        def Hv(u, v, w):
            return sum(u[a] * v[b] * w[d] * H[a, b, d] for a in range(n) for b in range(n) for d in range(n)
                       if u[a] and v[b] and w[d])

        out = {}
        for t in product(range(n), repeat=4):
            s = Fraction(0)
            for i in range(4):
                for j in range(i + 1, 4):
                    rest = [E(t[k]) for k in range(4) if k not in (i, j)]
                    s += (-1) ** (i + j) * Hv(self.br(E(t[i]), E(t[j])), *rest)
            out[t] = s
        return out

    def codifferential_omega(self):
        """δω(X) = −Σ (∇^LC_{e_i} ω)(e_i, X) over a g-orthogonal basis."""
        n = self.n
        basis = _orthogonal_basis(self)

        def omega(u, v):
            return self.g(self.Jv(u), v)

        def nab_omega(u, v, w):
            return -omega(self.Dv(self.lc, u, v), w) - omega(v, self.Dv(self.lc, u, w))

        return [-sum(nab_omega(b, b, self.e(x)) / self.g(b, b) for b in basis) for x in range(n)]


def _inverse(M):
    n = len(M)
    A = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    for col in range(n):
        p = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[p] = A[p], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _orthogonal_basis(o: Oracle):
    out = []
    for i in range(o.n):
        v = o.e(i)
        for w in out:
            f = o.g(v, w) / o.g(w, w)
            v = [a - f * b for a, b in zip(v, w)]
        out.append(v)
    return out


def nonzero_values(d) -> list[Fraction]:
    vals = d.values() if isinstance(d, dict) else d
    flat = []
    for v in vals:
        if isinstance(v, list):
            flat += [x for x in v if x != 0]
        elif v != 0:
            flat.append(v)
    return sorted(flat)
