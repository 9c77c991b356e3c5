"""Core syntax: sorts, symbols, signatures and the unified expression tree.

Boolean-sorted expressions double as formulas everywhere; the term/formula
split of ordinary many-sorted logic only reappears after translation.
All trees are immutable: transformations build new trees and may share
subtrees freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .errors import DuplicateDeclaration, SortMismatch, UndeclaredSymbol

# Names starting with this character can never be produced by the lexer,
# which is what keeps generated symbols collision-free.
FRESH_PREFIX = "\x1f"


# ---------------------------------------------------------------------------
# Sorts
# ---------------------------------------------------------------------------

class Sort:
    """Base class for sorts; equality is structural."""

    __slots__ = ()


@dataclass(frozen=True)
class AtomSort(Sort):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ArraySort(Sort):
    index: Sort
    value: Sort

    def __str__(self):
        return f"$array({self.index},{self.value})"


@dataclass(frozen=True)
class TupleSort(Sort):
    """Sort of tuple expressions; only produced by program encodings."""

    members: tuple[Sort, ...]

    def __str__(self):
        return "(" + ",".join(str(m) for m in self.members) + ")"


BOOL = AtomSort("$o")
INDIVIDUAL = AtomSort("$i")
INT = AtomSort("$int")


# ---------------------------------------------------------------------------
# Symbols
# ---------------------------------------------------------------------------

KIND_USER = "user"
KIND_INTERPRETED = "interpreted"
KIND_FRESH = "fresh"


@dataclass(frozen=True)
class Symbol:
    name: str
    arg_sorts: tuple[Sort, ...]
    result: Sort
    kind: str = KIND_USER
    origin: str = ""  # translation-pass tag for fresh symbols

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def is_predicate(self) -> bool:
        # FOOL collapses the function/predicate split: a predicate is just
        # a symbol whose result sort is the boolean sort.
        return self.result == BOOL

    def __str__(self):
        return self.name


TRUE_SYM = Symbol("$true", (), BOOL, KIND_INTERPRETED)
FALSE_SYM = Symbol("$false", (), BOOL, KIND_INTERPRETED)


def numeral(value) -> Symbol:
    return Symbol(str(int(value)), (), INT, KIND_INTERPRETED)


INTERPRETED_ARITH = {
    "$sum": ((INT, INT), INT),
    "$difference": ((INT, INT), INT),
    "$greater": ((INT, INT), BOOL),
    "$greatereq": ((INT, INT), BOOL),
    "$less": ((INT, INT), BOOL),
    "$lesseq": ((INT, INT), BOOL),
}


def interpreted_symbol(name: str) -> Symbol:
    args, result = INTERPRETED_ARITH[name]
    return Symbol(name, args, result, KIND_INTERPRETED)


def select_symbol(array_sort: ArraySort) -> Symbol:
    return Symbol("$select", (array_sort, array_sort.index), array_sort.value,
                  KIND_INTERPRETED)


def store_symbol(array_sort: ArraySort) -> Symbol:
    return Symbol("$store", (array_sort, array_sort.index, array_sort.value),
                  array_sort, KIND_INTERPRETED)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

NOT = "~"
AND = "&"
OR = "|"
IMPLIES = "=>"
IFF = "<=>"
XOR = "<~>"

BINARY_OPS = (AND, OR, IMPLIES, IFF, XOR)


class Expression:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expression):
    name: str
    sort: Sort

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Apply(Expression):
    symbol: Symbol
    args: tuple[Expression, ...] = ()

    def __str__(self):
        if not self.args:
            return self.symbol.name
        return f"{self.symbol.name}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Equal(Expression):
    lhs: Expression
    rhs: Expression

    def __str__(self):
        return f"({self.lhs} = {self.rhs})"


@dataclass(frozen=True)
class Connective(Expression):
    op: str
    operands: tuple[Expression, ...]

    def __str__(self):
        if self.op == NOT:
            return f"~{self.operands[0]}"
        return "(" + f" {self.op} ".join(map(str, self.operands)) + ")"


@dataclass(frozen=True)
class Quantifier(Expression):
    kind: str  # "!" or "?"
    bound: tuple[tuple[str, Sort], ...]
    body: Expression

    def __str__(self):
        vs = ",".join(f"{n}:{s}" for n, s in self.bound)
        return f"{self.kind}[{vs}]:{self.body}"


@dataclass(frozen=True)
class Ite(Expression):
    condition: Expression
    then_branch: Expression
    else_branch: Expression

    def __str__(self):
        return f"$ite({self.condition},{self.then_branch},{self.else_branch})"


@dataclass(frozen=True)
class Binding:
    """One local definition head(params) := body inside a Let.

    The head symbol is bound in the Let body only; binding bodies always
    refer to the enclosing scope.
    """

    head: Symbol
    params: tuple[tuple[str, Sort], ...]
    body: Expression


@dataclass(frozen=True)
class TupleBinding:
    """Simultaneous tuple pattern (x1,...,xn) := body; program encodings only."""

    heads: tuple[Symbol, ...]
    body: Expression


@dataclass(frozen=True)
class Let(Expression):
    bindings: tuple  # of Binding | TupleBinding
    body: Expression

    def __str__(self):
        bs = "; ".join(str(b) for b in self.bindings)
        return f"$let({bs}, {self.body})"


@dataclass(frozen=True)
class TupleExpr(Expression):
    members: tuple[Expression, ...]

    def __str__(self):
        return "(" + ",".join(map(str, self.members)) + ")"


TRUE = Apply(TRUE_SYM)
FALSE = Apply(FALSE_SYM)


def lnot(e: Expression) -> Expression:
    return Connective(NOT, (e,))


def land(a: Expression, b: Expression) -> Expression:
    return Connective(AND, (a, b))


def lor(a: Expression, b: Expression) -> Expression:
    return Connective(OR, (a, b))


def implies(a: Expression, b: Expression) -> Expression:
    return Connective(IMPLIES, (a, b))


def iff(a: Expression, b: Expression) -> Expression:
    return Connective(IFF, (a, b))


def xor(a: Expression, b: Expression) -> Expression:
    return Connective(XOR, (a, b))


def forall(bound, body) -> Expression:
    bound = tuple(bound)
    return Quantifier("!", bound, body) if bound else body


def exists(bound, body) -> Expression:
    bound = tuple(bound)
    return Quantifier("?", bound, body) if bound else body


# ---------------------------------------------------------------------------
# Signature
# ---------------------------------------------------------------------------

class Signature:
    """Symbol table with declared sorts and a fresh-name counter.

    Mutation is confined to declaration time and to a single translation
    pass; the symbols themselves are immutable values.
    """

    def __init__(self):
        self.symbols: dict[str, Symbol] = {}
        self.sort_names: dict[str, AtomSort] = {}
        self.fresh_counter = 0

    def copy(self) -> "Signature":
        sig = Signature()
        sig.symbols = dict(self.symbols)
        sig.sort_names = dict(self.sort_names)
        sig.fresh_counter = self.fresh_counter
        return sig

    def declare_sort(self, name: str) -> AtomSort:
        if name in self.sort_names:
            raise DuplicateDeclaration(name)
        sort = AtomSort(name)
        self.sort_names[name] = sort
        return sort

    def declare(self, symbol: Symbol) -> Symbol:
        existing = self.symbols.get(symbol.name)
        if existing is not None:
            if existing != symbol:
                raise DuplicateDeclaration(symbol.name)
            return existing
        self.symbols[symbol.name] = symbol
        return symbol

    def lookup(self, name: str) -> Symbol:
        try:
            return self.symbols[name]
        except KeyError:
            raise UndeclaredSymbol(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def fresh_symbol(self, arg_sorts, result: Sort, origin: str) -> Symbol:
        name = f"{FRESH_PREFIX}{origin}{self.fresh_counter}"
        self.fresh_counter += 1
        sym = Symbol(name, tuple(arg_sorts), result, KIND_FRESH, origin)
        self.symbols[name] = sym
        return sym

    def declaration_index(self, name: str) -> int:
        # Insertion order doubles as the symbol precedence seed.
        for i, key in enumerate(self.symbols):
            if key == name:
                return i
        return len(self.symbols)


def fresh_symbol(sig: Signature, arg_sorts, result: Sort, origin: str) -> Symbol:
    return sig.fresh_symbol(arg_sorts, result, origin)


# ---------------------------------------------------------------------------
# Sort computation / well-sortedness
# ---------------------------------------------------------------------------

def sort_of(e: Expression, sig: Optional[Signature] = None) -> Sort:
    """Sort of a well-sorted expression; raises SortMismatch/UndeclaredSymbol.

    When a signature is supplied, every applied symbol must be declared
    there, be interpreted, or be bound by an enclosing Let.
    """
    return _sort_of(e, sig, (), ())


def _sort_of(e, sig, heads, path):
    if isinstance(e, Var):
        return e.sort
    if isinstance(e, Apply):
        sym = e.symbol
        if sig is not None and sym.kind == KIND_USER and sym.name not in heads:
            if sym.name not in sig:
                raise UndeclaredSymbol(sym.name)
        if len(e.args) != sym.arity:
            raise SortMismatch("argument count", path, sym.arity, len(e.args))
        for i, (arg, want) in enumerate(zip(e.args, sym.arg_sorts)):
            got = _sort_of(arg, sig, heads, path + (f"{sym.name}[{i}]",))
            if got != want:
                raise SortMismatch("argument sort", path + (f"{sym.name}[{i}]",), want, got)
        return sym.result
    if isinstance(e, Equal):
        l = _sort_of(e.lhs, sig, heads, path + ("=lhs",))
        r = _sort_of(e.rhs, sig, heads, path + ("=rhs",))
        if l != r:
            raise SortMismatch("equality sorts differ", path, l, r)
        return BOOL
    if isinstance(e, Connective):
        for i, op in enumerate(e.operands):
            got = _sort_of(op, sig, heads, path + (e.op,))
            if got != BOOL:
                raise SortMismatch("connective operand", path + (e.op,), BOOL, got)
        return BOOL
    if isinstance(e, Quantifier):
        got = _sort_of(e.body, sig, heads, path + (e.kind,))
        if got != BOOL:
            raise SortMismatch("quantifier body", path + (e.kind,), BOOL, got)
        return BOOL
    if isinstance(e, Ite):
        c = _sort_of(e.condition, sig, heads, path + ("$ite.cond",))
        if c != BOOL:
            raise SortMismatch("ite condition", path, BOOL, c)
        t = _sort_of(e.then_branch, sig, heads, path + ("$ite.then",))
        f = _sort_of(e.else_branch, sig, heads, path + ("$ite.else",))
        if t != f:
            raise SortMismatch("ite branch sorts differ", path, t, f)
        return t
    if isinstance(e, Let):
        seen = set()
        inner = heads
        for b in e.bindings:
            if isinstance(b, TupleBinding):
                got = _sort_of(b.body, sig, heads, path + ("$let.binding",))
                want = TupleSort(tuple(h.result for h in b.heads))
                if got != want:
                    raise SortMismatch("tuple binding sort", path, want, got)
                for h in b.heads:
                    inner = inner + (h.name,)
                continue
            if b.head.name in seen:
                raise SortMismatch("duplicate binding head", path, None, b.head.name)
            seen.add(b.head.name)
            names = [n for n, _ in b.params]
            if len(set(names)) != len(names):
                raise SortMismatch("binding parameters not distinct", path, None, names)
            if tuple(s for _, s in b.params) != b.head.arg_sorts:
                raise SortMismatch("binding parameter sorts", path,
                                   b.head.arg_sorts, tuple(s for _, s in b.params))
            got = _sort_of(b.body, sig, heads, path + ("$let.binding",))
            if got != b.head.result:
                raise SortMismatch("binding body sort", path, b.head.result, got)
            inner = inner + (b.head.name,)
        return _sort_of(e.body, sig, inner, path + ("$let.body",))
    if isinstance(e, TupleExpr):
        return TupleSort(tuple(_sort_of(m, sig, heads, path + ("tuple",))
                               for m in e.members))
    raise SortMismatch(f"unknown expression node {type(e).__name__}", path)


def is_bool(e: Expression) -> bool:
    return sort_of(e) == BOOL


# ---------------------------------------------------------------------------
# Free variables
# ---------------------------------------------------------------------------

def free_vars(e: Expression) -> list[tuple[str, Sort]]:
    """Free variables in first-occurrence, depth-first order."""
    out: list[tuple[str, Sort]] = []
    seen: set[str] = set()

    def walk(e, bound):
        if isinstance(e, Var):
            if e.name not in bound and e.name not in seen:
                seen.add(e.name)
                out.append((e.name, e.sort))
        elif isinstance(e, Apply):
            for a in e.args:
                walk(a, bound)
        elif isinstance(e, Equal):
            walk(e.lhs, bound)
            walk(e.rhs, bound)
        elif isinstance(e, Connective):
            for a in e.operands:
                walk(a, bound)
        elif isinstance(e, Quantifier):
            inner = bound | {n for n, _ in e.bound}
            walk(e.body, inner)
        elif isinstance(e, Ite):
            walk(e.condition, bound)
            walk(e.then_branch, bound)
            walk(e.else_branch, bound)
        elif isinstance(e, Let):
            for b in e.bindings:
                if isinstance(b, TupleBinding):
                    walk(b.body, bound)
                else:
                    walk(b.body, bound | {n for n, _ in b.params})
            walk(e.body, bound)
        elif isinstance(e, TupleExpr):
            for m in e.members:
                walk(m, bound)

    walk(e, set())
    return out


def var_names(e: Expression) -> set[str]:
    """All variable names occurring in e, free or bound."""
    out: set[str] = set()

    def walk(e):
        if isinstance(e, Var):
            out.add(e.name)
        elif isinstance(e, Apply):
            for a in e.args:
                walk(a)
        elif isinstance(e, Equal):
            walk(e.lhs)
            walk(e.rhs)
        elif isinstance(e, Connective):
            for a in e.operands:
                walk(a)
        elif isinstance(e, Quantifier):
            out.update(n for n, _ in e.bound)
            walk(e.body)
        elif isinstance(e, Ite):
            walk(e.condition)
            walk(e.then_branch)
            walk(e.else_branch)
        elif isinstance(e, Let):
            for b in e.bindings:
                if isinstance(b, Binding):
                    out.update(n for n, _ in b.params)
                walk(b.body)
            walk(e.body)
        elif isinstance(e, TupleExpr):
            for m in e.members:
                walk(m)

    walk(e)
    return out


def fresh_var_name(base: str, used: set[str]) -> str:
    stem = base.rstrip("0123456789") or "X"
    i = 0
    while True:
        cand = f"{stem}{i}"
        if cand not in used:
            used.add(cand)
            return cand
        i += 1


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def substitute(e: Expression, mapping: dict[str, Expression]) -> Expression:
    """Capture-avoiding substitution of free variables."""
    if not mapping:
        return e
    intro: set[str] = set()
    for repl in mapping.values():
        intro.update(n for n, _ in free_vars(repl))
    return _subst(e, dict(mapping), intro)


def _rename_binders(names, mapping, intro, body_vars):
    """Rename binder names that would capture substituted expressions."""
    renaming = {}
    used = set(body_vars) | intro | set(mapping)
    for n, s in names:
        if n in intro:
            new = fresh_var_name(n, used)
            renaming[n] = Var(new, s)
    return renaming


def _subst(e, mapping, intro):
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Apply):
        return Apply(e.symbol, tuple(_subst(a, mapping, intro) for a in e.args))
    if isinstance(e, Equal):
        return Equal(_subst(e.lhs, mapping, intro), _subst(e.rhs, mapping, intro))
    if isinstance(e, Connective):
        return Connective(e.op, tuple(_subst(a, mapping, intro) for a in e.operands))
    if isinstance(e, Quantifier):
        inner = {k: v for k, v in mapping.items()
                 if k not in {n for n, _ in e.bound}}
        if not inner:
            return e
        ren = _rename_binders(e.bound, inner, intro, var_names(e.body))
        bound = tuple((ren[n].name if n in ren else n, s) for n, s in e.bound)
        body = _subst(e.body, {**inner, **ren}, intro | {v.name for v in ren.values()})
        return Quantifier(e.kind, bound, body)
    if isinstance(e, Ite):
        return Ite(_subst(e.condition, mapping, intro),
                   _subst(e.then_branch, mapping, intro),
                   _subst(e.else_branch, mapping, intro))
    if isinstance(e, Let):
        bindings = []
        for b in e.bindings:
            if isinstance(b, TupleBinding):
                bindings.append(TupleBinding(b.heads, _subst(b.body, mapping, intro)))
                continue
            inner = {k: v for k, v in mapping.items()
                     if k not in {n for n, _ in b.params}}
            if inner:
                ren = _rename_binders(b.params, inner, intro, var_names(b.body))
                params = tuple((ren[n].name if n in ren else n, s) for n, s in b.params)
                body = _subst(b.body, {**inner, **ren},
                              intro | {v.name for v in ren.values()})
            else:
                params, body = b.params, b.body
            bindings.append(Binding(b.head, params, body))
        return Let(tuple(bindings), _subst(e.body, mapping, intro))
    if isinstance(e, TupleExpr):
        return TupleExpr(tuple(_subst(m, mapping, intro) for m in e.members))
    return e


def rename_bound(e: Expression, names: set[str]) -> Expression:
    """Rename every binder in e whose name is in `names` to something fresh."""
    used = var_names(e) | set(names)

    def walk(e):
        if isinstance(e, (Var, Apply)) and not getattr(e, "args", ()):
            return e
        if isinstance(e, Apply):
            return Apply(e.symbol, tuple(walk(a) for a in e.args))
        if isinstance(e, Equal):
            return Equal(walk(e.lhs), walk(e.rhs))
        if isinstance(e, Connective):
            return Connective(e.op, tuple(walk(a) for a in e.operands))
        if isinstance(e, Quantifier):
            body = walk(e.body)
            ren = {}
            bound = []
            for n, s in e.bound:
                if n in names:
                    new = fresh_var_name(n, used)
                    ren[n] = Var(new, s)
                    bound.append((new, s))
                else:
                    bound.append((n, s))
            if ren:
                body = substitute(body, ren)
            return Quantifier(e.kind, tuple(bound), body)
        if isinstance(e, Ite):
            return Ite(walk(e.condition), walk(e.then_branch), walk(e.else_branch))
        if isinstance(e, Let):
            bindings = []
            for b in e.bindings:
                if isinstance(b, TupleBinding):
                    bindings.append(TupleBinding(b.heads, walk(b.body)))
                    continue
                body = walk(b.body)
                ren = {}
                params = []
                for n, s in b.params:
                    if n in names:
                        new = fresh_var_name(n, used)
                        ren[n] = Var(new, s)
                        params.append((new, s))
                    else:
                        params.append((n, s))
                if ren:
                    body = substitute(body, ren)
                bindings.append(Binding(b.head, tuple(params), body))
            return Let(tuple(bindings), walk(e.body))
        if isinstance(e, TupleExpr):
            return TupleExpr(tuple(walk(m) for m in e.members))
        return e

    return walk(e)


def replace_symbol_apps(e: Expression, name: str,
                        replacer: Callable[[Apply], Expression]) -> Expression:
    """Rewrite free applications of the named symbol, bottom-up.

    Let bindings whose head has the same name shadow it: the Let body is
    left alone, binding bodies are still rewritten (they see outer scope).
    """

    def walk(e):
        if isinstance(e, Var):
            return e
        if isinstance(e, Apply):
            new = Apply(e.symbol, tuple(walk(a) for a in e.args))
            if e.symbol.name == name:
                return replacer(new)
            return new
        if isinstance(e, Equal):
            return Equal(walk(e.lhs), walk(e.rhs))
        if isinstance(e, Connective):
            return Connective(e.op, tuple(walk(a) for a in e.operands))
        if isinstance(e, Quantifier):
            return Quantifier(e.kind, e.bound, walk(e.body))
        if isinstance(e, Ite):
            return Ite(walk(e.condition), walk(e.then_branch), walk(e.else_branch))
        if isinstance(e, Let):
            shadowed = False
            bindings = []
            for b in e.bindings:
                if isinstance(b, TupleBinding):
                    bindings.append(TupleBinding(b.heads, walk(b.body)))
                    shadowed = shadowed or any(h.name == name for h in b.heads)
                else:
                    bindings.append(Binding(b.head, b.params, walk(b.body)))
                    shadowed = shadowed or b.head.name == name
            body = e.body if shadowed else walk(e.body)
            return Let(tuple(bindings), body)
        if isinstance(e, TupleExpr):
            return TupleExpr(tuple(walk(m) for m in e.members))
        return e

    return walk(e)


def symbol_occurs_free(e: Expression, name: str) -> bool:
    found = False

    def mark(app):
        nonlocal found
        found = True
        return app

    replace_symbol_apps(e, name, mark)
    return found


# ---------------------------------------------------------------------------
# Alpha equality
# ---------------------------------------------------------------------------

def _pairable(sym: Symbol) -> bool:
    # Generated symbols print as quoted atoms, so a reparsed tree pairs
    # its quoted user symbols against the original fresh ones.
    return sym.kind == KIND_FRESH or sym.name.startswith("'")


class _AlphaCtx:
    def __init__(self):
        self.fwd: dict[str, str] = {}
        self.bwd: dict[str, str] = {}

    def match(self, a: Symbol, b: Symbol) -> bool:
        if a.arg_sorts != b.arg_sorts or a.result != b.result:
            return False
        if _pairable(a) or _pairable(b):
            got = self.fwd.get(a.name)
            if got is not None:
                return got == b.name and self.bwd.get(b.name) == a.name
            if b.name in self.bwd:
                return False
            self.fwd[a.name] = b.name
            self.bwd[b.name] = a.name
            return True
        return a.name == b.name


def alpha_equal(a, b) -> bool:
    """Equality modulo bound-variable names, Let-head names, and a
    consistent bijection between generated symbols."""
    ctx = _AlphaCtx()
    return _alpha(a, b, {}, {}, {}, {}, ctx)


def _alpha(a, b, va, vb, ha, hb, ctx):
    # va/vb: bound-variable renamings; ha/hb: Let-head renamings.
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        na = va.get(a.name, a.name)
        nb = vb.get(b.name, b.name)
        return na == nb and a.sort == b.sort
    if isinstance(a, Apply):
        if len(a.args) != len(b.args):
            return False
        name_a = ha.get(a.symbol.name)
        name_b = hb.get(b.symbol.name)
        if name_a is not None or name_b is not None:
            if name_a != name_b:
                return False
            if (a.symbol.arg_sorts != b.symbol.arg_sorts
                    or a.symbol.result != b.symbol.result):
                return False
        elif not ctx.match(a.symbol, b.symbol):
            return False
        return all(_alpha(x, y, va, vb, ha, hb, ctx)
                   for x, y in zip(a.args, b.args))
    if isinstance(a, Equal):
        return (_alpha(a.lhs, b.lhs, va, vb, ha, hb, ctx)
                and _alpha(a.rhs, b.rhs, va, vb, ha, hb, ctx))
    if isinstance(a, Connective):
        return (a.op == b.op and len(a.operands) == len(b.operands)
                and all(_alpha(x, y, va, vb, ha, hb, ctx)
                        for x, y in zip(a.operands, b.operands)))
    if isinstance(a, Quantifier):
        if a.kind != b.kind or len(a.bound) != len(b.bound):
            return False
        va, vb = dict(va), dict(vb)
        for i, ((na, sa), (nb, sb)) in enumerate(zip(a.bound, b.bound)):
            if sa != sb:
                return False
            marker = f"\x00q{len(va)}_{i}"
            va[na] = marker
            vb[nb] = marker
        return _alpha(a.body, b.body, va, vb, ha, hb, ctx)
    if isinstance(a, Ite):
        return (_alpha(a.condition, b.condition, va, vb, ha, hb, ctx)
                and _alpha(a.then_branch, b.then_branch, va, vb, ha, hb, ctx)
                and _alpha(a.else_branch, b.else_branch, va, vb, ha, hb, ctx))
    if isinstance(a, Let):
        if len(a.bindings) != len(b.bindings):
            return False
        ha2, hb2 = dict(ha), dict(hb)
        for i, (x, y) in enumerate(zip(a.bindings, b.bindings)):
            if type(x) is not type(y):
                return False
            marker = f"\x00h{len(ha2)}_{i}"
            if isinstance(x, TupleBinding):
                if len(x.heads) != len(y.heads):
                    return False
                if not _alpha(x.body, y.body, va, vb, ha, hb, ctx):
                    return False
                for j, (hx, hy) in enumerate(zip(x.heads, y.heads)):
                    if hx.result != hy.result:
                        return False
                    ha2[hx.name] = f"{marker}.{j}"
                    hb2[hy.name] = f"{marker}.{j}"
                continue
            if len(x.params) != len(y.params):
                return False
            pva, pvb = dict(va), dict(vb)
            for j, ((nx, sx), (ny, sy)) in enumerate(zip(x.params, y.params)):
                if sx != sy:
                    return False
                pm = f"\x00p{i}_{j}"
                pva[nx] = pm
                pvb[ny] = pm
            if not _alpha(x.body, y.body, pva, pvb, ha, hb, ctx):
                return False
            if (x.head.arg_sorts != y.head.arg_sorts
                    or x.head.result != y.head.result):
                return False
            ha2[x.head.name] = marker
            hb2[y.head.name] = marker
        return _alpha(a.body, b.body, va, vb, ha2, hb2, ctx)
    if isinstance(a, TupleExpr):
        return (len(a.members) == len(b.members)
                and all(_alpha(x, y, va, vb, ha, hb, ctx)
                        for x, y in zip(a.members, b.members)))
    return False


# ---------------------------------------------------------------------------
# Misc tree utilities
# ---------------------------------------------------------------------------

def node_count(e: Expression) -> int:
    if isinstance(e, Var):
        return 1
    if isinstance(e, Apply):
        return 1 + sum(node_count(a) for a in e.args)
    if isinstance(e, Equal):
        return 1 + node_count(e.lhs) + node_count(e.rhs)
    if isinstance(e, Connective):
        return 1 + sum(node_count(a) for a in e.operands)
    if isinstance(e, Quantifier):
        return 1 + node_count(e.body)
    if isinstance(e, Ite):
        return 1 + node_count(e.condition) + node_count(e.then_branch) + node_count(e.else_branch)
    if isinstance(e, Let):
        return 1 + sum(node_count(b.body) for b in e.bindings) + node_count(e.body)
    if isinstance(e, TupleExpr):
        return 1 + sum(node_count(m) for m in e.members)
    return 1


def subexpressions(e: Expression):
    yield e
    if isinstance(e, Apply):
        for a in e.args:
            yield from subexpressions(a)
    elif isinstance(e, Equal):
        yield from subexpressions(e.lhs)
        yield from subexpressions(e.rhs)
    elif isinstance(e, Connective):
        for a in e.operands:
            yield from subexpressions(a)
    elif isinstance(e, Quantifier):
        yield from subexpressions(e.body)
    elif isinstance(e, Ite):
        yield from subexpressions(e.condition)
        yield from subexpressions(e.then_branch)
        yield from subexpressions(e.else_branch)
    elif isinstance(e, Let):
        for b in e.bindings:
            yield from subexpressions(b.body)
        yield from subexpressions(e.body)
    elif isinstance(e, TupleExpr):
        for m in e.members:
            yield from subexpressions(m)
