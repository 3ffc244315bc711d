"""Per-instance verification of the structural theorems about finite effect algebras.

Every law in :data:`LAW_IDS` yields exactly one entry per instance, with
status ``pass``, ``fail`` (always carrying a witness) or ``skipped``
(hypotheses unmet or a size guard hit).  A skipped law never counts as a pass.
"""
import time
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional

from . import guards
from . import topo
from .core import (
    EffectAlgebra,
    atom_decomposition,
    finite_elements,
    is_compact_element,
    is_compatible,
    is_principal_element,
    members,
    multiple,
    oplus_family,
    sharp_decomposition,
    smallest_sharp_above,
)
from .errors import (
    DecompositionFailed,
    InternalInconsistency,
    LemmaViolation,
    NotALattice,
    NotSharplyDominating,
    OracleMismatch,
    SizeGuardExceeded,
    UniquenessViolated,
)

LAW_IDS = (
    "Thm2.1",
    "Thm3.1",
    "Thm4.1",
    "Thm4.2/4.3",
    "Cor4.1",
    "Lem2.3",
    "Lem2.4",
    "Lem2.5",
    "Lem3.1.i",
    "Lem3.1.ii",
    "Lem3.1.iii",
    "Lem3.2",
    "Lem3.3.i",
    "Lem3.3.ii",
    "Lem3.3.iii",
    "Lem3.3.iv",
    "Lem3.4",
    "Lem3.5",
    "Lem3.6",
    "Lem3.7",
    "Lem4.2",
    "PrincipalIffSharp",
)


@dataclass
class LawEntry:
    law_id: str
    status: str                       # "pass" | "fail" | "skipped"
    witness: Optional[dict] = None
    reason: Optional[str] = None
    seconds: float = 0.0


@dataclass
class LawReport:
    instance: str
    entries: List[LawEntry] = field(default_factory=list)

    def failures(self):
        return [e for e in self.entries if e.status == "fail"]

    def entry(self, law_id):
        return next(e for e in self.entries if e.law_id == law_id)


class _Skip(Exception):
    pass


class _Fail(Exception):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(str(witness))


class _Facts:
    """Lazily computed structure shared by the checks of one instance."""

    def __init__(self, E: EffectAlgebra):
        self.E = E

    def lattice(self):
        if not self.E.is_lattice:
            raise _Skip("not a lattice")

    def atomic_lattice(self):
        self.lattice()
        if not self.E.is_atomic:
            raise _Skip("not atomic")

    def distributive(self):
        self.atomic_lattice()
        if not self.E.is_distributive:
            raise _Skip("not distributive")

    def o_continuous(self):
        self.lattice()
        if not self.E.is_o_continuous:
            raise _Skip("not (o)-continuous")

    @cached_property
    def tau_o(self):
        return topo.order_topology(self.E)

    @cached_property
    def tau_i(self):
        return topo.interval_topology(self.E)

    @cached_property
    def tau_id(self):
        return topo.frink_ideal_topology(self.E)

    @cached_property
    def finite(self):
        return finite_elements(self.E)

    def name(self, x):
        return self.E.names[x]


def _run(law_id, check, facts) -> LawEntry:
    start = time.perf_counter()
    try:
        check(facts)
        status, witness, reason = "pass", None, None
    except _Skip as exc:
        status, witness, reason = "skipped", None, str(exc)
    except SizeGuardExceeded as exc:
        status, witness, reason = "skipped", None, f"size guard: {exc}"
    except NotALattice:
        status, witness, reason = "skipped", None, "not a lattice"
    except _Fail as exc:
        status, witness, reason = "fail", exc.witness, None
    except LemmaViolation as exc:
        status, witness, reason = "fail", {"law": exc.law, "detail": exc.witness}, None
    except (DecompositionFailed, UniquenessViolated, NotSharplyDominating, OracleMismatch, InternalInconsistency) as exc:
        status, witness, reason = "fail", {"error": type(exc).__name__, "detail": str(exc)}, None
    return LawEntry(law_id, status, witness, reason, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# order continuity and the order topology


def _thm21(f: _Facts):
    f.atomic_lattice()
    E = f.E
    o_cont = E.is_o_continuous
    T = f.tau_o
    order_topological = o_cont and topo.is_discrete(T)
    if o_cont and order_topological != topo.is_hausdorff(T):
        raise _Fail({"o_continuous": o_cont, "discrete": topo.is_discrete(T), "hausdorff": topo.is_hausdorff(T)})
    values = {
        "o_continuous": o_cont,
        "order_topological": order_topological,
        "totally_order_disconnected": topo.is_totally_order_disconnected(E),
        "algebraic": E.is_algebraic,
    }
    if len(set(values.values())) != 1:
        raise _Fail(values)


def _lem23(f: _Facts):
    f.atomic_lattice()
    f.o_continuous()
    for u in members(f.finite):
        if not is_compact_element(f.E, u):
            raise _Fail({"finite_element": f.name(u)})


def _lem24(f: _Facts):
    f.atomic_lattice()
    f.o_continuous()
    u = topo.clopen_interval_witness(f.E, f.tau_o)
    if u is not None:
        raise _Fail({"finite_element": f.name(u)})


def _lem25(f: _Facts):
    f.atomic_lattice()
    f.o_continuous()
    E, T = f.E, f.tau_o
    if not topo.lattice_ops_continuous(E, T):
        raise _Fail({"lattice_operations_continuous": False})
    pair = topo.separation_witness(E, T)
    if pair is not None:
        raise _Fail({"unseparated": [f.name(pair[0]), f.name(pair[1])]})


# ---------------------------------------------------------------------------
# sums, sharp elements, ideal topology


def _lem31i(f: _Facts):
    f.lattice()
    E = f.E
    for a in range(E.n):
        for b in range(E.n):
            s = E.oplus(a, b)
            if s is not None and E.oplus(E.join(a, b), E.meet(a, b)) != s:
                raise _Fail({"x": f.name(a), "y": f.name(b)})


def _lem31ii(f: _Facts):
    f.lattice()
    E = f.E
    nonzero = [x for x in range(E.n) if x != E.zero]
    for x in nonzero:
        for y in nonzero:
            if E.meet(x, y) != E.zero:
                continue
            for m in range(1, E.ords[x] + 1):
                for n in range(1, E.ords[y] + 1):
                    if E.oplus(multiple(E, x, m), multiple(E, y, n)) is None:
                        continue
                    for k in range(1, m + 1):
                        for l in range(1, n + 1):
                            kx, ly = multiple(E, x, k), multiple(E, y, l)
                            if E.meet(kx, ly) != E.zero or E.join(kx, ly) != E.oplus(kx, ly):
                                raise _Fail({"x": f.name(x), "y": f.name(y), "k": k, "l": l})


def _lem31iii(f: _Facts):
    f.lattice()
    E = f.E
    guards.require("compatible subsets", E.n, "subsets")
    for x in range(E.n):
        compat = [y for y in range(E.n) if is_compatible(E, x, y)]
        for bits in range(1 << len(compat)):
            Y = [compat[i] for i in range(len(compat)) if bits >> i & 1]
            top = E.join_all(Y)
            if E.meet(x, top) != E.join_all(E.meet(x, y) for y in Y) or not is_compatible(E, x, top):
                raise _Fail({"x": f.name(x), "Y": E.label(Y)})


def _orthogonal_families(E):
    """Nondecreasing tuples of nonzero elements whose total sum is defined."""
    nonzero = [x for x in range(E.n) if x != E.zero]
    out = []

    def extend(fam, total, start):
        for i in range(start, len(nonzero)):
            e = nonzero[i]
            s = E.oplus(total, e)
            if s is not None:
                out.append(fam + (e,))
                extend(fam + (e,), s, i)

    extend((), E.zero, 0)
    return out


def _lem32(f: _Facts):
    f.lattice()
    E = f.E
    guards.require("orthogonal families", E.n, "subsets")
    for fam in _orthogonal_families(E):
        total = oplus_family(E, fam)
        counts = {}
        for e in fam:
            counts[e] = counts.get(e, 0) + 1
        keys = sorted(counts)
        for split in product(*(range(counts[k] + 1) for k in keys)):
            h1 = [k for k, c in zip(keys, split) for _ in range(c)]
            h2 = [k for k, c in zip(keys, split) for _ in range(counts[k] - c)]
            s1, s2 = oplus_family(E, h1), oplus_family(E, h2)
            if s1 is None or s2 is None or E.oplus(s1, s2) != total:
                raise _Fail({"family": E.label(fam), "part": E.label(h1)})


def _atoms(E):
    return list(members(E.atom_mask))


def _lem33i(f: _Facts):
    f.atomic_lattice()
    E = f.E
    for a in _atoms(E):
        for k in range(1, E.ords[a]):
            ka = multiple(E, a, k)
            if E.meet(ka, E.ortho[ka]) == E.zero:
                raise _Fail({"atom": f.name(a), "k": k})


def _lem33ii(f: _Facts):
    f.atomic_lattice()
    E = f.E
    for a in _atoms(E):
        if not E.sharp_mask >> multiple(E, a, E.ords[a]) & 1:
            raise _Fail({"atom": f.name(a), "ord": E.ords[a]})


def _lem33iii(f: _Facts):
    f.atomic_lattice()
    E = f.E
    atoms = _atoms(E)

    def walk(i, total, terms):
        if i == len(atoms):
            if terms and E.join_all(terms) != total:
                raise _Fail({"terms": E.label(terms)})
            return
        a = atoms[i]
        walk(i + 1, total, terms)
        for k in range(1, E.ords[a] + 1):
            ka = multiple(E, a, k)
            s = E.oplus(total, ka)
            if s is None:
                break
            walk(i + 1, s, terms + [ka])

    walk(0, E.zero, [])


def _lem33iv(f: _Facts):
    f.atomic_lattice()
    E = f.E
    for x in range(E.n):
        if x == E.zero:
            continue
        dec = atom_decomposition(E, x)
        full_mult = all(k == E.ords[a] for a, k in dec.parts)
        if full_mult != bool(E.sharp_mask >> x & 1):
            raise _Fail({"x": f.name(x), "parts": [[f.name(a), k] for a, k in dec.parts]})


def _lem34(f: _Facts):
    f.atomic_lattice()
    E = f.E
    for x in range(E.n):
        if x == E.zero:
            continue
        d = sharp_decomposition(E, x)
        terms = [multiple(E, a, k) for a, k in d.residual.parts]
        rest = oplus_family(E, terms)
        r = E.ominus(x, d.sharp_part)
        if rest is None or E.oplus(d.sharp_part, rest) != x or r != rest:
            raise _Fail({"x": f.name(x), "sharp_part": f.name(d.sharp_part)})
        if E.down[r] & E.sharp_mask & ~(1 << E.zero):
            raise _Fail({"x": f.name(x), "sharp_below_residual": E.label(list(members(E.down[r] & E.sharp_mask)))})


def _lem35(f: _Facts):
    f.distributive()
    E = f.E
    for u in range(E.n):
        hat = smallest_sharp_above(E, u)
        if u in members(f.finite) and not f.finite >> hat & 1:
            raise _Fail({"u": f.name(u), "hat": f.name(hat)})


def _lem36(f: _Facts):
    f.distributive()
    E, F = f.E, f.finite
    for u in members(F):
        if E.down[u] & ~F:
            raise _Fail({"not_down_closed_at": f.name(u)})
        for v in members(F):
            if not F >> E.join(u, v) & 1:
                raise _Fail({"join_escapes": [f.name(u), f.name(v)]})


def _lem37(f: _Facts):
    f.distributive()
    Ti, To = f.tau_i, f.tau_o
    if not (topo.is_compact(Ti) and topo.is_hausdorff(Ti)):
        raise _Fail({"interval_topology_compact_hausdorff": False})
    if not topo.topologies_equal(To, Ti):
        raise _Fail({"order_equals_interval": False})


def _thm31(f: _Facts):
    f.distributive()
    E, To, Tid = f.E, f.tau_o, f.tau_id
    conditions = {
        "ideal_equals_order": topo.topologies_equal(Tid, To),
        "one_is_finite": bool(f.finite >> E.one & 1),
        "all_finite": f.finite == E.full,
        "both_discrete": topo.is_discrete(Tid) and topo.is_discrete(To),
    }
    hausdorff = topo.is_hausdorff(Tid)
    finer = topo.finer_than(Tid, To)
    if not (hausdorff and finer and all(conditions.values())):
        raise _Fail({"ideal_hausdorff": hausdorff, "ideal_finer_than_order": finer, **conditions})


def _principal(f: _Facts):
    f.lattice()
    for x in range(f.E.n):
        is_principal_element(f.E, x)


# ---------------------------------------------------------------------------
# continuity of the sum


def _thm41(f: _Facts):
    f.o_continuous()
    if not topo.oplus_continuous(f.E, f.tau_o):
        raise _Skip("⊕ is not continuous for the order topology")
    if not topo.is_hausdorff(f.tau_o):
        raise _Fail({"oplus_continuous": True, "order_hausdorff": False})


def _thm42_43(f: _Facts):
    f.atomic_lattice()
    f.o_continuous()
    E, T = f.E, f.tau_o
    if not topo.oplus_continuous_at(E, T, E.zero, E.zero):
        raise _Fail({"continuous_at_zero": False})
    if not topo.oplus_continuous(E, T):
        raise _Fail({"oplus_continuous": False})
    # constant nets: x_α = y converges to x iff both differences vanish
    for x in range(E.n):
        for y in range(E.n):
            upper = E.ominus(E.join(x, y), x)
            lower = E.ominus(x, E.meet(x, y))
            if (upper == E.zero and lower == E.zero) != (x == y):
                raise _Fail({"x": f.name(x), "y": f.name(y)})


def _cor41(f: _Facts):
    f.atomic_lattice()
    if not f.E.is_mv:
        raise _Skip("not an MV-effect algebra")
    if not topo.oplus_continuous(f.E, f.tau_o):
        raise _Fail({"oplus_continuous": False})


def _lem42(f: _Facts):
    f.o_continuous()
    E, T = f.E, f.tau_o
    if not topo.is_continuous(list(E.ortho), T, T):
        raise _Fail({"map": "orthosupplement"})
    for y in range(E.n):
        for label, op in (("join", E.join), ("meet", E.meet)):
            if not topo.is_continuous([op(x, y) for x in range(E.n)], T, T):
                raise _Fail({"map": label, "y": f.name(y)})


_CHECKS = {
    "Thm2.1": _thm21,
    "Thm3.1": _thm31,
    "Thm4.1": _thm41,
    "Thm4.2/4.3": _thm42_43,
    "Cor4.1": _cor41,
    "Lem2.3": _lem23,
    "Lem2.4": _lem24,
    "Lem2.5": _lem25,
    "Lem3.1.i": _lem31i,
    "Lem3.1.ii": _lem31ii,
    "Lem3.1.iii": _lem31iii,
    "Lem3.2": _lem32,
    "Lem3.3.i": _lem33i,
    "Lem3.3.ii": _lem33ii,
    "Lem3.3.iii": _lem33iii,
    "Lem3.3.iv": _lem33iv,
    "Lem3.4": _lem34,
    "Lem3.5": _lem35,
    "Lem3.6": _lem36,
    "Lem3.7": _lem37,
    "Lem4.2": _lem42,
    "PrincipalIffSharp": _principal,
}
assert tuple(_CHECKS) == LAW_IDS


def _entries(E, ids, facts=None):
    facts = facts or _Facts(E)
    return [_run(i, _CHECKS[i], facts) for i in ids]


def check_theorem_2_1(E: EffectAlgebra) -> LawEntry:
    return _entries(E, ["Thm2.1"])[0]


def check_theorem_3_1(E: EffectAlgebra) -> LawEntry:
    return _entries(E, ["Thm3.1"])[0]


def check_oplus_continuity(E: EffectAlgebra) -> List[LawEntry]:
    """Entries for Thm4.1, Thm4.2/4.3 and Cor4.1, sharing one order topology."""
    return _entries(E, ["Thm4.1", "Thm4.2/4.3", "Cor4.1"])


def check_lemma_suite(E: EffectAlgebra) -> List[LawEntry]:
    return _entries(E, [i for i in LAW_IDS if i.startswith("Lem") or i == "PrincipalIffSharp"])


def run_all(E: EffectAlgebra) -> LawReport:
    return LawReport(E.name, _entries(E, LAW_IDS))


# ---------------------------------------------------------------------------
# whole-instance analysis

FLAG_KEYS = ("lattice", "distributive", "atomic", "mv", "o_continuous", "algebraic")
TOPOLOGY_KEYS = ("interval", "order", "frink")


@dataclass
class Analysis:
    instance: str
    flags: Dict[str, Optional[bool]] = field(default_factory=lambda: dict.fromkeys(FLAG_KEYS))
    topologies: Dict[str, Optional[dict]] = field(default_factory=lambda: dict.fromkeys(TOPOLOGY_KEYS))
    laws: List[LawEntry] = field(default_factory=list)


def _guarded(fn):
    try:
        return fn()
    except (SizeGuardExceeded, NotALattice):
        return None


def _summary(T):
    return {"open_count": T.open_count(), "hausdorff": topo.is_hausdorff(T), "discrete": topo.is_discrete(T)}


def analyze(E: EffectAlgebra, with_laws: bool = True) -> Analysis:
    lattice = E.is_lattice
    flags = {
        "lattice": lattice,
        "distributive": E.is_distributive if lattice else None,
        "atomic": E.is_atomic,
        "mv": E.is_mv if lattice else None,
        "o_continuous": _guarded(lambda: E.is_o_continuous),
        "algebraic": _guarded(lambda: E.is_algebraic),
    }
    facts = _Facts(E)
    topologies = {
        "interval": _guarded(lambda: _summary(facts.tau_i)),
        "order": _guarded(lambda: _summary(facts.tau_o)),
        "frink": _guarded(lambda: _summary(facts.tau_id)),
    }
    laws = _entries(E, LAW_IDS, facts) if with_laws else []
    return Analysis(E.name, flags, topologies, laws)
