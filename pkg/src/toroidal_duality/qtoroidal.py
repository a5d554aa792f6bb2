"""
Structure constants of the cyclic diagram and the denominator-cleared
relation sweeps for the current algebra, generic over any module exposing
Fourier-mode operators.

Every relation with a rational multiplier theta_m(u) = (q^m u - 1)/(u - q^m)
is cross-multiplied into a polynomial coefficient identity before checking,
so each instance is a finite exact statement.  With u = d^m_ij z/w the
template for a current pair (G, H) twisted by (a, m) reads, per output
coefficient of z^-R w^-S,

    d^m G_{R+1} H_{S-1} - q^a G_R H_S
        = q^a d^m H_{S-1} G_{R+1} - H_S G_R ,

which at the zero modes specializes to the familiar q-commutator form.
All checks run at trivial central charge; central extensions are refused.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hecke import WindowBudget
from .duality import dvec_add, dvec_scale, dvec_sub, nondecreasing_tuples
from .scalars import sc_inv, sc_mul, sc_pow


@dataclass(frozen=True)
class CartanData:
    """Entry accessors for the cyclic [n] x [n] matrices A (symmetric) and M (antisymmetric)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("cyclic diagram needs n >= 2")

    def _check(self, i, j):
        if not (0 <= i <= self.n and 0 <= j <= self.n):
            raise IndexError(f"vertex out of range: {(i, j)}")

    def a(self, i, j):
        self._check(i, j)
        if i == j:
            return 2
        if (j - i) % (self.n + 1) in (1, self.n):
            return -1
        return 0

    def m(self, i, j):
        self._check(i, j)
        d = (j - i) % (self.n + 1)
        if d == 1:
            return -1
        if d == self.n:
            return 1
        return 0

    def adjacent_pairs(self):
        return [
            (i, j)
            for i in range(self.n + 1)
            for j in range(self.n + 1)
            if self.a(i, j) == -1
        ]


def _kmode(ops, sign, i, k, vec, budget):
    """k+ modes live at k >= 0 and k- modes at k <= 0; outside they are zero."""
    if sign > 0:
        if k < 0:
            return {}
        return ops.mode("k+", i, k, vec, budget)
    if k > 0:
        return {}
    return ops.mode("k-", i, k, vec, budget)


def _pair_cleared(left, right, a, m, d, q, R, S, vec, budget):
    """LHS - RHS of the cleared template for currents (left, right) twisted by (a, m)."""
    dm = sc_pow(d, m)
    qa = sc_pow(q, a)
    acc = {}
    hR1 = left(R + 1, right(S - 1, dict(vec), budget), budget)
    dvec_add(acc, hR1.items(), dm)
    hRS = left(R, right(S, dict(vec), budget), budget)
    dvec_add(acc, hRS.items(), sc_mul(Fraction(-1), qa))
    gSR = right(S - 1, left(R + 1, dict(vec), budget), budget)
    dvec_add(acc, gSR.items(), sc_mul(Fraction(-1), sc_mul(qa, dm)))
    gSS = right(S, left(R, dict(vec), budget), budget)
    dvec_add(acc, gSS.items(), Fraction(1))
    return acc


def current_relation_items(ops, K, probes):
    """(meta, thunk) pairs for relations 2.1.1 - 2.1.9 at mode window K."""
    if ops.params.c != Fraction(1):
        raise ValueError("relation sweeps are defined at trivial central charge only")
    assert K >= 1
    cartan = CartanData(ops.n)
    n = ops.n
    q, d = ops.q, ops.d
    qmqinv = q - sc_inv(q)
    items = []

    def emit(rel, ij, modes, pid, thunk):
        items.append(((rel, ij, modes, pid), thunk))

    kplus_range = list(range(0, K + 1))
    kminus_range = list(range(-K, 1))
    e_range = list(range(-K, K + 1))

    for pid, vec in probes:
        for i in range(n + 1):
            def unit_thunk(i=i, vec=vec):
                budget = WindowBudget()
                one = ops.mode("k+", i, 0, ops.mode("k-", i, 0, dict(vec), budget), budget)
                two = ops.mode("k-", i, 0, ops.mode("k+", i, 0, dict(vec), budget), budget)
                res1 = dvec_sub(one, vec)
                res2 = dvec_sub(two, vec)
                ok = not res1 and not res2
                return ok, budget.ok(), "" if ok else "k0 inverse fails"
            emit("2.1.1-unit", (i, i), (0, 0), pid, unit_thunk)

        for i in range(n + 1):
            for j in range(n + 1):
                # (2.1.1): like-sign Cartan currents commute; (2.1.2) degenerates
                # at c = 1 to mixed-sign commutation.
                for rel, s1, s2, range1, range2 in (
                    ("2.1.1", +1, +1, kplus_range, kplus_range),
                    ("2.1.1", -1, -1, kminus_range, kminus_range),
                    ("2.1.2", +1, -1, kplus_range, kminus_range),
                    ("2.1.2", -1, +1, kminus_range, kplus_range),
                ):
                    for ka in range1:
                        for kb in range2:
                            def comm_thunk(i=i, j=j, s1=s1, s2=s2, ka=ka, kb=kb, vec=vec):
                                budget = WindowBudget()
                                ab = _kmode(ops, s1, i, ka, _kmode(ops, s2, j, kb, dict(vec), budget), budget)
                                ba = _kmode(ops, s2, j, kb, _kmode(ops, s1, i, ka, dict(vec), budget), budget)
                                res = dvec_sub(ab, ba)
                                return (not res), budget.ok(), "" if not res else f"{len(res)} residual terms"
                            emit(rel, (i, j), (s1, ka, s2, kb), pid, comm_thunk)

                a = cartan.a(i, j)
                m = cartan.m(i, j)

                # (2.1.3)/(2.1.4): Cartan current against e / f currents.
                for rel, sign, other_kind, aa in (
                    ("2.1.3", +1, "e", a),
                    ("2.1.3", -1, "e", a),
                    ("2.1.4", +1, "f", -a),
                    ("2.1.4", -1, "f", -a),
                ):
                    # modes R and R+1 must stay inside the window or be
                    # definitionally zero for the given sign
                    Rs = [-1] + kplus_range[:-1] if sign > 0 else kminus_range
                    Rs = sorted(set(Rs))
                    for R in Rs:
                        for S in range(-K + 1, K + 1):
                            def ke_thunk(i=i, j=j, sign=sign, other_kind=other_kind, aa=aa, m=m, R=R, S=S, vec=vec):
                                budget = WindowBudget()
                                left = lambda kk, v, b: _kmode(ops, sign, i, kk, v, b)
                                right = lambda kk, v, b: ops.mode(other_kind, j, kk, v, b)
                                res = _pair_cleared(left, right, aa, m, d, q, R, S, vec, budget)
                                return (not res), budget.ok(), "" if not res else f"{len(res)} residual terms"
                            emit(rel, (i, j), (sign, R, S), pid, ke_thunk)

                # (2.1.5): exchange of e and f closes on the Cartan modes.
                for r in e_range:
                    for s in e_range:
                        def ef_thunk(i=i, j=j, r=r, s=s, vec=vec):
                            budget = WindowBudget()
                            ef = ops.mode("e", i, r, ops.mode("f", j, s, dict(vec), budget), budget)
                            fe = ops.mode("f", j, s, ops.mode("e", i, r, dict(vec), budget), budget)
                            lhs = dvec_scale(qmqinv, dvec_sub(ef, fe))
                            rhs = {}
                            if i == j:
                                h = r + s
                                if h >= 0:
                                    dvec_add(rhs, ops.mode("k+", i, h, dict(vec), budget).items())
                                if h <= 0:
                                    dvec_add(rhs, ops.mode("k-", i, h, dict(vec), budget).items(), Fraction(-1))
                            res = dvec_sub(lhs, rhs)
                            return (not res), budget.ok(), "" if not res else f"{len(res)} residual terms"
                        emit("2.1.5", (i, j), (r, s), pid, ef_thunk)

                # (2.1.6)/(2.1.7): e-e and f-f exchange with theta twist.
                for rel, kind, aa in (("2.1.6", "e", a), ("2.1.7", "f", -a)):
                    for r in range(-K + 1, K + 1):
                        for s in range(-K + 1, K + 1):
                            def ee_thunk(i=i, j=j, kind=kind, aa=aa, m=m, r=r, s=s, vec=vec):
                                budget = WindowBudget()
                                left = lambda kk, v, b: ops.mode(kind, i, kk, v, b)
                                right = lambda kk, v, b: ops.mode(kind, j, kk, v, b)
                                res = _pair_cleared(left, right, aa, m, d, q, r - 1, s, vec, budget)
                                return (not res), budget.ok(), "" if not res else f"{len(res)} residual terms"
                            emit(rel, (i, j), (r, s), pid, ee_thunk)

        # (2.1.8)/(2.1.9): cubic Serre relations for adjacent vertices.
        for i, j in cartan.adjacent_pairs():
            for rel, kind in (("2.1.8", "e"), ("2.1.9", "f")):
                for k1 in e_range:
                    for k2 in e_range:
                        if k2 < k1:
                            continue  # the z1 <-> z2 symmetrization makes (k1,k2) ~ (k2,k1)
                        for kk in e_range:
                            def serre_thunk(i=i, j=j, kind=kind, k1=k1, k2=k2, kk=kk, vec=vec):
                                budget = WindowBudget()
                                qq = q + sc_inv(q)

                                def word(aaa, bbb, ccc, v):
                                    v = ops.mode(kind, *ccc, dict(v), budget)
                                    v = ops.mode(kind, *bbb, v, budget)
                                    return ops.mode(kind, *aaa, v, budget)

                                acc = {}
                                for m1, m2 in ((k1, k2), (k2, k1)):
                                    dvec_add(acc, word((i, m1), (i, m2), (j, kk), vec).items())
                                    dvec_add(acc, word((i, m1), (j, kk), (i, m2), vec).items(),
                                             sc_mul(Fraction(-1), qq))
                                    dvec_add(acc, word((j, kk), (i, m1), (i, m2), vec).items())
                                return (not acc), budget.ok(), "" if not acc else f"{len(acc)} residual terms"
                            emit(rel, (i, j), (k1, k2, kk), pid, serre_thunk)
    return items


def integrability_items(ops, K, probes):
    """Weight decomposition with q-power eigenvalues, and mode nilpotency of order <= l + 1."""
    n, l = ops.n, ops.l
    q = ops.q
    items = []
    for pid, vec in probes:
        for i in range(n + 1):
            def weight_thunk(i=i, vec=vec):
                budget = WindowBudget()
                got = ops.mode("k+", i, 0, dict(vec), budget)
                want = {}
                for (hk, jt), c in vec.items():
                    dvec_add(want, [((hk, jt), sc_mul(c, sc_pow(q, ops.weight(i, jt))))])
                res = dvec_sub(got, want)
                return (not res), budget.ok(), "" if not res else "weight action mismatch"
            items.append((("int.weight", (i,), (0,), pid), weight_thunk))
        for i in range(n + 1):
            for kind in ("e", "f"):
                for k in range(-K, K + 1):
                    def nil_thunk(i=i, kind=kind, k=k, vec=vec):
                        budget = WindowBudget()
                        v = dict(vec)
                        for _ in range(l + 1):
                            v = ops.mode(kind, i, k, v, budget)
                            if not v:
                                break
                        return (not v), budget.ok(), "" if not v else "not nilpotent within l+1 steps"
                    items.append((("int.nilpotent", (i,), (k,), pid), nil_thunk))
    return items


def central_charge_items(ops, probes):
    """k_{0,0} k_{1,0} ... k_{n,0} = id, plus a mixed-sign commutation spot check."""
    n = ops.n
    items = []
    for pid, vec in probes:
        def prod_thunk(vec=vec):
            budget = WindowBudget()
            v = dict(vec)
            for i in range(n, -1, -1):
                v = ops.mode("k+", i, 0, v, budget)
            res = dvec_sub(v, vec)
            return (not res), budget.ok(), "" if not res else "k-product is not the identity"
        items.append((("cc.k-product", (), (), pid), prod_thunk))
        for i in range(n + 1):
            for j in range(n + 1):
                def mix_thunk(i=i, j=j, vec=vec):
                    budget = WindowBudget()
                    ab = ops.mode("k+", i, 1, ops.mode("k-", j, -1, dict(vec), budget), budget)
                    ba = ops.mode("k-", j, -1, ops.mode("k+", i, 1, dict(vec), budget), budget)
                    res = dvec_sub(ab, ba)
                    return (not res), budget.ok(), "" if not res else "mixed Cartan modes do not commute"
                items.append((("cc.kpm-comm", (i, j), (1, -1), pid), mix_thunk))
    return items


def level_weight_set(n, l):
    """All finite-type weight vectors occurring in V^(x)l."""
    out = set()
    for jt in nondecreasing_tuples(n, l):
        out.add(tuple(
            sum(1 for v in jt if v == i) - sum(1 for v in jt if v == i + 1)
            for i in range(1, n + 1)
        ))
    return out


def level_items(ops, probes):
    """Necessary level-l condition: observed finite weights lie in the V^(x)l weight set."""
    allowed = level_weight_set(ops.n, ops.l)
    items = []
    for pid, vec in probes:
        def level_thunk(vec=vec):
            seen = {
                tuple(ops.weight(i, jt) for i in range(1, ops.n + 1))
                for (_, jt) in vec.keys()
            }
            bad = seen - allowed
            return (not bad), True, "" if not bad else f"foreign weights {sorted(bad)[:3]}"
        items.append((("level.weights", (), (), pid), level_thunk))
    return items
