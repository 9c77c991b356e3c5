"""Frontend for the extended TFF0 dialect.

Extensions over plain TFF0: $o as an argument/quantifier/equality sort,
formulas in boolean argument positions, unified $ite and $let (with
multi-bindings), $array sorts with ad-hoc polymorphic $select/$store.
The printer can round-trip problems and can also render strict TFF0 via
$$bool/$$true/$$false renaming; `dialect="strict"` parses that output.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from .errors import (DuplicateDeclaration, ParseError, SortMismatch,
                     UndeclaredSymbol, UnsupportedHigherOrderFeature)
from .terms import (AND, BINARY_OPS, BOOL, FALSE, FALSE_SYM, FRESH_PREFIX,
                    IFF, IMPLIES, INDIVIDUAL, INT, INTERPRETED_ARITH, NOT, OR,
                    TRUE, TRUE_SYM, XOR, Apply, ArraySort, AtomSort, Binding,
                    Connective, Equal, Expression, Ite, Let, Quantifier,
                    Signature, Sort, Symbol, TupleBinding, TupleExpr, Var,
                    alpha_equal, interpreted_symbol, numeral, select_symbol,
                    sort_of, store_symbol)

ROLES = {"axiom", "hypothesis", "definition", "assumption", "lemma", "theorem",
         "corollary", "conjecture", "negated_conjecture", "plain", "type"}

LEGACY_ITE = {"$ite_t", "$ite_f"}
LEGACY_LET = {"$let_tt", "$let_tf", "$let_ft", "$let_ff"}
DEPRECATED_ARRAY = {"$array1", "$array2", "$select1", "$select2", "$store1",
                    "$store2"}


@dataclass
class AnnotatedUnit:
    name: str
    role: str
    formula: Optional[Expression] = None
    symbol: Optional[Symbol] = None
    sort_name: Optional[str] = None

    def is_type_decl(self) -> bool:
        return self.role == "type"


@dataclass
class Problem:
    units: list
    signature: Signature
    source: str = "<input>"

    def formula_units(self):
        return [u for u in self.units if u.formula is not None]

    def conjecture(self):
        for u in self.units:
            if u.role == "conjecture":
                return u
        return None

    def copy(self) -> "Problem":
        return Problem(list(self.units), self.signature.copy(), self.source)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # LOWER UPPER DOLLAR DDOLLAR QUOTED INT PUNCT EOF
    text: str
    line: int
    col: int


_PUNCT3 = ("<=>", "<~>")
_PUNCT2 = ("=>", ":=", "!=", "<=", "@+", "@-", "!!", "??")
_PUNCT1 = "()[],.:;!?~&|=*>@^<"


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def err(msg):
        raise ParseError(f"{filename}: {msg}", line, col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                err("unterminated block comment")
            skipped = text[i:end + 2]
            line += skipped.count("\n")
            col = 1 if "\n" in skipped else col + len(skipped)
            i = end + 2
            continue
        start_line, start_col = line, col
        if ch == "'":
            j = i + 1
            while j < n and text[j] != "'":
                if text[j] == "\\":
                    j += 1
                if not (32 <= ord(text[j]) <= 126):
                    err("illegal character in quoted atom")
                j += 1
            if j >= n:
                err("unterminated quoted atom")
            toks.append(Token("QUOTED", text[i:j + 1], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("INT", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == "$":
            dollars = 2 if text.startswith("$$", i) else 1
            j = i + dollars
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i + dollars:
                err("bare $")
            kind = "DDOLLAR" if dollars == 2 else "DOLLAR"
            toks.append(Token(kind, text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            kind = "UPPER" if ch.isupper() or ch == "_" else "LOWER"
            toks.append(Token(kind, text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        matched = None
        for p in _PUNCT3:
            if text.startswith(p, i):
                matched = p
                break
        if matched is None:
            for p in _PUNCT2:
                if text.startswith(p, i):
                    matched = p
                    break
        if matched is None and ch in _PUNCT1:
            matched = ch
        if matched is None:
            err(f"unexpected character {ch!r}")
        toks.append(Token("PUNCT", matched, start_line, start_col))
        col += len(matched)
        i += len(matched)
    toks.append(Token("EOF", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_PENDING = AtomSort("\x00pending")


class _Parser:
    def __init__(self, signature: Signature, dialect: str = "extended",
                 filename: str = "<input>"):
        assert dialect in ("extended", "strict")
        self.sig = signature
        self.strict = dialect == "strict"
        self.filename = filename
        self.units: list[AnnotatedUnit] = []
        self.explicit_sorts: set[str] = set()
        # strict-dialect bookkeeping: spelling-dependent legality checks
        self.dd_nodes: set[int] = set()
        self.bool_func_decls: set[str] = set()

    # -- token plumbing ---------------------------------------------------

    def _use(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self, ahead=0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            self.err(f"expected {text!r}, found {t.text!r}", t)
        return t

    def err(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(f"{self.filename}: {msg}", tok.line, tok.col)

    # -- units ------------------------------------------------------------

    def parse_units(self, text: str, path: Optional[str] = None,
                    seen_includes: Optional[set] = None):
        """Scan the file into raw unit token slices, following includes."""
        toks = tokenize(text, self.filename)
        raw = []
        i = 0
        while toks[i].kind != "EOF":
            t = toks[i]
            if t.text == "include":
                j = i
                while toks[j].text != "." or toks[j].kind != "PUNCT":
                    j += 1
                    if toks[j].kind == "EOF":
                        self.err("unterminated include", t)
                inc = toks[i:j + 1]
                if len(inc) < 5 or inc[2].kind != "QUOTED":
                    self.err("malformed include", t)
                raw.extend(self._load_include(inc[2].text[1:-1], path,
                                              seen_includes or set()))
                i = j + 1
                continue
            if t.text not in ("tff", "cnf", "fof"):
                self.err(f"expected annotated unit, found {t.text!r}", t)
            depth = 0
            j = i
            while True:
                tj = toks[j]
                if tj.kind == "EOF":
                    self.err("unterminated unit", t)
                if tj.text == "(":
                    depth += 1
                elif tj.text == ")":
                    depth -= 1
                elif tj.text == "." and depth == 0:
                    break
                j += 1
            raw.append(toks[i:j + 1] + [Token("EOF", "", toks[j].line, toks[j].col)])
            i = j + 1
        return raw

    def _load_include(self, relpath, parent_path, seen):
        candidates = []
        if parent_path:
            candidates.append(os.path.join(os.path.dirname(parent_path), relpath))
        if os.environ.get("TPTP"):
            candidates.append(os.path.join(os.environ["TPTP"], relpath))
        candidates.append(relpath)
        for cand in candidates:
            if os.path.exists(cand):
                real = os.path.realpath(cand)
                if real in seen:
                    return []
                seen.add(real)
                with open(cand, "r") as fh:
                    sub = _Parser(self.sig, "strict" if self.strict else "extended", cand)
                    return sub.parse_units(fh.read(), cand, seen)
        raise ParseError(f"{self.filename}: cannot resolve include {relpath!r}")

    def parse_problem(self, text: str, path: Optional[str] = None) -> Problem:
        raw_units = self.parse_units(text, path, set())
        headers = []
        for toks in raw_units:
            self._use(toks)
            lang = self.next().text
            if lang != "tff":
                self.err(f"only tff units are supported, found {lang!r}")
            self.expect("(")
            name = self._unit_name()
            self.expect(",")
            role = self.next().text
            if role not in ROLES:
                self.err(f"unknown role {role!r}")
            self.expect(",")
            headers.append((name, role, toks, self.pos))
        # first pass: declarations, so use may precede declaration
        for name, role, toks, start in headers:
            if role == "type":
                self._use(toks)
                self.pos = start
                self._parse_type_unit(name)
        conjectures = 0
        for name, role, toks, start in headers:
            if role == "type":
                continue
            if role == "conjecture":
                conjectures += 1
                if conjectures > 1:
                    self.err("more than one conjecture unit")
            self._use(toks)
            self.pos = start
            formula = self.parse_expr({}, (), BOOL)
            self._close_unit()
            got = sort_of(formula, self.sig)
            if got != BOOL:
                raise SortMismatch(f"unit {name} is not boolean", (name,), BOOL, got)
            if self.strict:
                self._strict_scan(formula, term_pos=False, unit=name)
            self.units.append(AnnotatedUnit(name, role, formula=formula))
        return Problem(self.units, self.sig)

    def _unit_name(self) -> str:
        t = self.next()
        if t.kind in ("LOWER", "QUOTED", "INT"):
            return t.text
        self.err("expected unit name", t)

    def _close_unit(self):
        self.expect(")")
        self.expect(".")

    # -- type declarations --------------------------------------------------

    def _parse_type_unit(self, name):
        wrapped = 0
        while self.peek().text == "(" and self.peek(1).kind in ("LOWER", "QUOTED", "DDOLLAR"):
            # lookahead for "(name :" wrapping
            if self.peek(2).text == ":":
                self.next()
                wrapped += 1
            else:
                break
        t = self.next()
        if t.kind not in ("LOWER", "QUOTED", "DDOLLAR"):
            self.err("expected symbol name in type declaration", t)
        if t.kind == "DDOLLAR" and not self.strict:
            self.err(f"{t.text} is not recognised in input problems", t)
        sym_name = t.text
        self.expect(":")
        if self.peek().text == "$tType":
            self.next()
            if self.strict and sym_name == "$$bool":
                pass  # alias of the boolean sort; nothing to declare
            else:
                if sym_name in self.explicit_sorts:
                    raise DuplicateDeclaration(sym_name)
                self.explicit_sorts.add(sym_name)
                if sym_name not in self.sig.sort_names:
                    self.sig.declare_sort(sym_name)
        else:
            arg_sorts, result, result_spelled_dd = self._parse_symbol_type()
            if self.strict and sym_name in ("$$true", "$$false"):
                pass  # appended constant declarations from show_fool output
            else:
                self.sig.declare(Symbol(sym_name, arg_sorts, result))
                if self.strict and result_spelled_dd:
                    self.bool_func_decls.add(sym_name)
        for _ in range(wrapped):
            self.expect(")")
        self._close_unit()

    def _parse_symbol_type(self):
        result_dd = False
        if self.peek().text == "(" :
            self.next()
            args = [self.parse_sort("decl_arg")]
            while self.peek().text == "*":
                self.next()
                args.append(self.parse_sort("decl_arg"))
            self.expect(")")
            self.expect(">")
            spelled = self.peek().text
            result = self.parse_sort("decl_result")
            return tuple(args), result, spelled == "$$bool"
        first_spelled = self.peek().text
        first = self.parse_sort("decl_result")
        if self.peek().text == ">":
            self.next()
            spelled = self.peek().text
            result = self.parse_sort("decl_result")
            if self.strict and first_spelled == "$o":
                self.err("$o argument sort is not strict TFF0")
            return (first,), result, spelled == "$$bool"
        return (), first, first_spelled == "$$bool"

    def parse_sort(self, context: str) -> Sort:
        t = self.next()
        if t.text == "$o":
            if self.strict and context in ("decl_arg", "quantifier", "param"):
                self.err("$o may not be used as an argument or variable sort "
                         "in strict TFF0", t)
            return BOOL
        if t.text == "$$bool":
            if not self.strict:
                self.err("$$bool is not recognised in input problems", t)
            return BOOL
        if t.text == "$i":
            return INDIVIDUAL
        if t.text == "$int":
            return INT
        if t.text == "$array":
            self.expect("(")
            index = self.parse_sort("array_member")
            self.expect(",")
            value = self.parse_sort("array_member")
            self.expect(")")
            return ArraySort(index, value)
        if t.text in DEPRECATED_ARRAY:
            self.err(f"{t.text} is deprecated; use $array($int,$int) style "
                     "sorts with $select/$store", t)
        if t.kind in ("LOWER", "QUOTED"):
            if t.text not in self.sig.sort_names:
                self.sig.declare_sort(t.text)
            return self.sig.sort_names[t.text]
        self.err(f"expected a sort, found {t.text!r}", t)

    # -- expressions --------------------------------------------------------

    def parse_expr(self, env, heads, expected):
        # an &/| chain binds tighter than the non-associative connectives;
        # distinct associative operators still need parentheses
        lhs = self._parse_chain(env, heads, expected)
        op = self.peek().text
        if op in (IMPLIES, IFF, XOR):
            self.next()
            rhs = self._parse_chain(env, heads, BOOL)
            nxt = self.peek().text
            if nxt in (IMPLIES, IFF, XOR, "<="):
                self.err(f"{op!r} is non-associative; use parentheses")
            return Connective(op, (lhs, rhs))
        if op == "<=":
            self.err("the reverse implication connective is not supported")
        return lhs

    def _parse_chain(self, env, heads, expected):
        lhs = self.parse_unitary_eq(env, heads, expected)
        op = self.peek().text
        if op not in ("&", "|"):
            return lhs
        if sort_of(lhs, self.sig) != BOOL:
            raise SortMismatch("connective operand", (), BOOL, sort_of(lhs, self.sig))
        while self.peek().text == op:
            self.next()
            rhs = self.parse_unitary_eq(env, heads, BOOL)
            lhs = Connective(op, (lhs, rhs))
        nxt = self.peek().text
        if nxt in ("&", "|"):
            self.err(f"{op!r} may not be mixed with {nxt!r} without parentheses")
        return lhs

    def parse_unitary_eq(self, env, heads, expected):
        lhs = self.parse_unitary(env, heads, _PENDING)
        t = self.peek().text
        if t in ("=", "!="):
            self.next()
            lhs = self._resolve_pending(lhs, None)
            lsort = sort_of(lhs, self.sig)
            rhs = self.parse_unitary(env, heads, lsort)
            rhs = self._resolve_pending(rhs, lsort)
            rsort = sort_of(rhs, self.sig)
            if lsort != rsort:
                raise SortMismatch("equality sorts differ", (), lsort, rsort)
            eq = Equal(lhs, rhs)
            return Connective(NOT, (eq,)) if t == "!=" else eq
        return self._resolve_pending(lhs, expected if expected is not _PENDING else None)

    def _resolve_pending(self, e, sort):
        if isinstance(e, Apply) and e.symbol.result is _PENDING:
            final = Symbol(e.symbol.name, e.symbol.arg_sorts,
                           sort if sort is not None else INDIVIDUAL)
            self.sig.declare(final)
            return Apply(final, e.args)
        return e

    def parse_unitary(self, env, heads, expected):
        t = self.peek()
        text = t.text
        if text in ("!", "?"):
            self.next()
            self.expect("[")
            bound = []
            inner = dict(env)
            while True:
                v = self.next()
                if v.kind != "UPPER":
                    self.err("expected a variable", v)
                if self.peek().text == ":":
                    self.next()
                    s = self.parse_sort("quantifier")
                else:
                    s = INDIVIDUAL
                bound.append((v.text, s))
                inner[v.text] = s
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect("]")
            self.expect(":")
            body = self.parse_unitary_eq(inner, heads, BOOL)
            return Quantifier(text, tuple(bound), body)
        if text == "~":
            self.next()
            arg = self.parse_unitary(env, heads, BOOL)
            arg = self._resolve_pending(arg, BOOL)
            return Connective(NOT, (arg,))
        if text == "(":
            self.next()
            e = self.parse_expr(env, heads,
                                expected if expected is not _PENDING else None)
            self.expect(")")
            return e
        if text == "$ite" or text in LEGACY_ITE:
            if self.strict:
                self.err(f"{text} is not strict TFF0", t)
            self.next()
            self.expect("(")
            cond = self.parse_expr(env, heads, BOOL)
            self.expect(",")
            want = expected if expected is not _PENDING else None
            a = self.parse_expr(env, heads, want)
            self.expect(",")
            b = self.parse_expr(env, heads, sort_of(a, self.sig))
            self.expect(")")
            return Ite(cond, a, b)
        if text == "$let":
            if self.strict:
                self.err("$let is not strict TFF0", t)
            return self._parse_let(env, heads, expected)
        if text in LEGACY_LET:
            if self.strict:
                self.err(f"{text} is not strict TFF0", t)
            return self._parse_legacy_let(env, heads, expected)
        if text == "$select":
            self.next()
            self.expect("(")
            arr = self.parse_expr(env, heads, None)
            asort = sort_of(arr, self.sig)
            if not isinstance(asort, ArraySort):
                raise SortMismatch("$select of a non-array", (), "an array sort", asort)
            self.expect(",")
            idx = self.parse_expr(env, heads, asort.index)
            self.expect(")")
            self._check(asort.index, idx, "$select index")
            return Apply(select_symbol(asort), (arr, idx))
        if text == "$store":
            self.next()
            self.expect("(")
            arr = self.parse_expr(env, heads, None)
            asort = sort_of(arr, self.sig)
            if not isinstance(asort, ArraySort):
                raise SortMismatch("$store of a non-array", (), "an array sort", asort)
            self.expect(",")
            idx = self.parse_expr(env, heads, asort.index)
            self.expect(",")
            val = self.parse_expr(env, heads, asort.value)
            self.expect(")")
            self._check(asort.index, idx, "$store index")
            self._check(asort.value, val, "$store value")
            return Apply(store_symbol(asort), (arr, idx, val))
        if text in DEPRECATED_ARRAY:
            self.err(f"{text} is deprecated; use the $array($int,$int) sorts "
                     "with polymorphic $select/$store", t)
        if text == "$true" or text == "$false":
            self.next()
            return Apply(TRUE_SYM if text == "$true" else FALSE_SYM, ())
        if text in ("$$true", "$$false"):
            if not self.strict:
                self.err(f"{text} is not recognised in input problems", t)
            self.next()
            node = Apply(TRUE_SYM if text == "$$true" else FALSE_SYM, ())
            self.dd_nodes.add(id(node))
            return node
        if t.kind == "DDOLLAR":
            self.err(f"{text} is not recognised in input problems", t)
        if text in INTERPRETED_ARITH:
            self.next()
            sym = interpreted_symbol(text)
            args = self._parse_args(env, heads, sym.arg_sorts)
            return Apply(sym, args)
        if t.kind == "INT":
            self.next()
            return Apply(numeral(text), ())
        if t.kind == "UPPER":
            self.next()
            if text not in env:
                self.err(f"unbound variable {text}", t)
            return Var(text, env[text])
        if t.kind in ("LOWER", "QUOTED"):
            self.next()
            return self._parse_application(t, env, heads, expected)
        if t.kind == "DOLLAR":
            self.err(f"unsupported defined symbol {text}", t)
        self.err(f"unexpected token {text!r}", t)

    def _check(self, want, e, what):
        got = sort_of(e, self.sig)
        if got != want:
            raise SortMismatch(what, (), want, got)

    def _parse_args(self, env, heads, arg_sorts):
        self.expect("(")
        args = []
        for i, want in enumerate(arg_sorts):
            if i:
                self.expect(",")
            a = self.parse_expr(env, heads, want)
            self._check(want, a, f"argument {i + 1}")
            args.append(a)
        self.expect(")")
        return tuple(args)

    def _parse_application(self, t, env, heads, expected):
        name = t.text
        sym = None
        for scope in reversed(heads):
            if name in scope:
                sym = scope[name]
                break
        declared = sym is not None
        if sym is None and name in self.sig:
            sym = self.sig.lookup(name)
            declared = True
        if declared:
            if sym.arity and self.peek().text != "(":
                self.err(f"{name} expects {sym.arity} arguments", t)
            args = self._parse_args(env, heads, sym.arg_sorts) if sym.arity else ()
            return Apply(sym, args)
        # undeclared: default argument sorts from the parsed arguments and
        # defer the result sort until the caller knows the position
        args = []
        if self.peek().text == "(":
            self.next()
            while True:
                args.append(self.parse_expr(env, heads, None))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect(")")
        arg_sorts = tuple(sort_of(a, self.sig) for a in args)
        if expected is _PENDING:
            return Apply(Symbol(name, arg_sorts, _PENDING), tuple(args))
        result = expected if expected is not None else INDIVIDUAL
        sym = self.sig.declare(Symbol(name, arg_sorts, result))
        return Apply(sym, tuple(args))

    # -- let ---------------------------------------------------------------

    def _parse_let(self, env, heads, expected):
        self.next()
        self.expect("(")
        bindings = []
        names = set()
        while True:
            b = self._parse_binding(env, heads)
            if b.head.name in names:
                self.err(f"duplicate binding head {b.head.name}")
            names.add(b.head.name)
            bindings.append(b)
            if self.peek().text == ";":
                self.next()
                continue
            break
        self.expect(",")
        scope = {b.head.name: b.head for b in bindings}
        body = self.parse_expr(env, heads + (scope,),
                               expected if expected is not _PENDING else None)
        self.expect(")")
        return Let(tuple(bindings), body)

    def _parse_binding(self, env, heads) -> Binding:
        t = self.next()
        if t.kind not in ("LOWER", "QUOTED"):
            self.err("expected a binding head", t)
        name = t.text
        params = []
        if self.peek().text == "(":
            self.next()
            while True:
                v = self.next()
                if v.kind != "UPPER":
                    self.err("expected a parameter variable", v)
                if self.peek().text == ":":
                    self.next()
                    s = self.parse_sort("param")
                else:
                    s = INDIVIDUAL
                if any(v.text == n for n, _ in params):
                    self.err(f"repeated parameter {v.text}", v)
                params.append((v.text, s))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect(")")
        self.expect(":=")
        inner = dict(env)
        inner.update(params)
        body = self.parse_expr(inner, heads, None)
        head = Symbol(name, tuple(s for _, s in params), sort_of(body, self.sig))
        return Binding(head, tuple(params), body)

    def _parse_legacy_let(self, env, heads, expected):
        kw = self.next().text
        self.expect("(")
        params = []
        inner = dict(env)
        if self.peek().text == "!":
            self.next()
            self.expect("[")
            while True:
                v = self.next()
                if v.kind != "UPPER":
                    self.err("expected a variable", v)
                if self.peek().text == ":":
                    self.next()
                    s = self.parse_sort("param")
                else:
                    s = INDIVIDUAL
                params.append((v.text, s))
                inner[v.text] = s
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect("]")
            self.expect(":")
        wrapped = self.peek().text == "("
        if wrapped:
            self.next()
        h = self.next()
        if h.kind not in ("LOWER", "QUOTED"):
            self.err("expected the defined symbol of the binding", h)
        head_args = []
        if self.peek().text == "(":
            self.next()
            while True:
                v = self.next()
                if v.kind != "UPPER":
                    self.err("binding arguments must be the quantified variables", v)
                head_args.append(v.text)
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect(")")
        if head_args != [n for n, _ in params]:
            self.err("binding arguments must match the quantified variables")
        sep = self.next().text
        if sep not in ("=", "<=>"):
            self.err("expected = or <=> in legacy let binding")
        body = self.parse_expr(inner, heads, BOOL if sep == "<=>" else None)
        if wrapped:
            self.expect(")")
        self.expect(",")
        head = Symbol(h.text, tuple(s for _, s in params), sort_of(body, self.sig))
        scope = {head.name: head}
        let_body = self.parse_expr(env, heads + (scope,),
                                   expected if expected is not _PENDING else None)
        self.expect(")")
        return Let((Binding(head, tuple(params), body),), let_body)

    # -- strict dialect scan -------------------------------------------------

    def _strict_scan(self, e, term_pos, unit):
        def bad(msg):
            raise ParseError(f"{self.filename}: unit {unit}: {msg} in strict TFF0")

        if isinstance(e, Var):
            if e.sort == BOOL and not term_pos:
                bad("boolean variable used as a formula")
            return
        if isinstance(e, Apply):
            if e.symbol in (TRUE_SYM, FALSE_SYM):
                spelled_dd = id(e) in self.dd_nodes
                if term_pos and not spelled_dd:
                    bad("$true/$false used as an argument (use $$true/$$false)")
                if not term_pos and spelled_dd:
                    bad("$$true/$$false used as a formula")
                return
            if e.symbol.result == BOOL and e.symbol.name != "$select":
                is_func = e.symbol.name in self.bool_func_decls
                if term_pos and not is_func:
                    bad(f"predicate {e.symbol.name} used as an argument")
                if not term_pos and is_func:
                    bad(f"boolean function {e.symbol.name} used as a formula")
            for a in e.args:
                self._strict_scan(a, True, unit)
            return
        if isinstance(e, Equal):
            if term_pos:
                bad("equality used as an argument")
            self._strict_scan(e.lhs, True, unit)
            self._strict_scan(e.rhs, True, unit)
            return
        if isinstance(e, (Connective, Quantifier)):
            if term_pos:
                bad("formula used as an argument")
            if isinstance(e, Connective):
                for a in e.operands:
                    self._strict_scan(a, False, unit)
            else:
                self._strict_scan(e.body, False, unit)
            return
        bad(f"{type(e).__name__} node")


def parse_problem(text: str, path: Optional[str] = None,
                  dialect: str = "extended",
                  signature: Optional[Signature] = None) -> Problem:
    parser = _Parser(signature if signature is not None else Signature(),
                     dialect, path or "<input>")
    problem = parser.parse_problem(text, path)
    problem.source = path or "<input>"
    return problem


def parse_file(path: str, dialect: str = "extended") -> Problem:
    with open(path, "r") as fh:
        return parse_problem(fh.read(), path, dialect)


def parse_formula(text: str, signature: Signature,
                  env: Optional[dict] = None) -> Expression:
    """Parse a single extended-TFF0 formula against an existing signature."""
    parser = _Parser(signature, "extended", "<formula>")
    parser._use(tokenize(text, "<formula>"))
    e = parser.parse_expr(dict(env or {}), (), BOOL)
    if parser.peek().kind != "EOF":
        parser.err("trailing input after formula")
    return e


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

def _term_position_bool_functions(problem: Problem) -> set[str]:
    """Names of boolean-result symbols that occur in term positions.

    After translation these act as functions into the boolean sort; in
    show_fool mode their result sort prints as $$bool.
    """
    out: set[str] = set()

    def walk(e, term_pos):
        if isinstance(e, Apply):
            if (term_pos and e.symbol.result == BOOL
                    and e.symbol not in (TRUE_SYM, FALSE_SYM)
                    and e.symbol.name != "$select"):
                out.add(e.symbol.name)
            for a in e.args:
                walk(a, True)
        elif isinstance(e, Equal):
            walk(e.lhs, True)
            walk(e.rhs, True)
        elif isinstance(e, Connective):
            for a in e.operands:
                walk(a, False)
        elif isinstance(e, Quantifier):
            walk(e.body, False)
        elif isinstance(e, Ite):
            walk(e.condition, False)
            b = sort_of(e.then_branch) == BOOL
            walk(e.then_branch, not b and term_pos)
            walk(e.else_branch, not b and term_pos)
        elif isinstance(e, Let):
            for binding in e.bindings:
                walk(binding.body, sort_of(binding.body) != BOOL)
            walk(e.body, term_pos)
        elif isinstance(e, TupleExpr):
            for m in e.members:
                walk(m, True)

    for u in problem.units:
        if u.formula is not None:
            walk(u.formula, False)
    return out


class _Printer:
    def __init__(self, problem: Problem, show_fool: bool):
        self.problem = problem
        self.show_fool = show_fool
        self.bool_funcs = _term_position_bool_functions(problem) if show_fool else set()
        self.rename = self._fresh_renaming()

    def _fresh_renaming(self) -> dict[str, str]:
        taken = set(self.problem.signature.symbols)
        rename = {}
        for name in self.problem.signature.symbols:
            if name.startswith(FRESH_PREFIX):
                base = name[len(FRESH_PREFIX):]
                cand = f"'{base}'"
                while cand in taken:
                    cand = f"'{cand[1:-1]}_'"
                taken.add(cand)
                rename[name] = cand
        return rename

    def symbol_name(self, sym: Symbol) -> str:
        return self.rename.get(sym.name, sym.name)

    def sort(self, s: Sort, data_bool: bool) -> str:
        if s == BOOL:
            return "$$bool" if (self.show_fool and data_bool) else "$o"
        if isinstance(s, ArraySort):
            return f"$array({self.sort(s.index, False)},{self.sort(s.value, False)})"
        if isinstance(s, AtomSort):
            return s.name
        raise ValueError(f"sort {s} is not printable")

    def decl(self, sym: Symbol) -> str:
        result_dd = self.show_fool and sym.result == BOOL and sym.name in self.bool_funcs
        res = "$$bool" if result_dd else self.sort(sym.result, False)
        if not sym.arg_sorts:
            return f"{self.symbol_name(sym)}: {res}"
        args = [self.sort(a, True) for a in sym.arg_sorts]
        if len(args) == 1:
            return f"{self.symbol_name(sym)}: {args[0]} > {res}"
        return f"{self.symbol_name(sym)}: ({' * '.join(args)}) > {res}"

    # expression printing -------------------------------------------------

    def expr(self, e, term_pos=False) -> str:
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Apply):
            if e.symbol == TRUE_SYM:
                return "$$true" if (self.show_fool and term_pos) else "$true"
            if e.symbol == FALSE_SYM:
                return "$$false" if (self.show_fool and term_pos) else "$false"
            if not e.args:
                return self.symbol_name(e.symbol)
            args = ",".join(self.expr(a, term_pos=True) for a in e.args)
            return f"{self.symbol_name(e.symbol)}({args})"
        if isinstance(e, Equal):
            return f"{self.side(e.lhs)} = {self.side(e.rhs)}"
        if isinstance(e, Connective):
            if e.op == NOT:
                inner = e.operands[0]
                if isinstance(inner, Equal):
                    return f"{self.side(inner.lhs)} != {self.side(inner.rhs)}"
                return f"~{self.unitary(inner)}"
            parts = [self.unitary(a) for a in self.flatten(e)]
            return f" {e.op} ".join(parts)
        if isinstance(e, Quantifier):
            vs = ", ".join(f"{n}:{self.sort(s, True)}" for n, s in e.bound)
            return f"{e.kind}[{vs}]: {self.quant_body(e.body)}"
        if isinstance(e, Ite):
            return (f"$ite({self.expr(e.condition)}, "
                    f"{self.expr(e.then_branch, term_pos)}, "
                    f"{self.expr(e.else_branch, term_pos)})")
        if isinstance(e, Let):
            bs = "; ".join(self.binding(b) for b in e.bindings)
            return f"$let({bs}, {self.expr(e.body, term_pos)})"
        raise ValueError(f"{type(e).__name__} is not printable as TPTP")

    def flatten(self, e):
        # chains of one associative connective print without parentheses
        if isinstance(e, Connective) and e.op in (AND, OR):
            left = e.operands[0]
            if isinstance(left, Connective) and left.op == e.op:
                return self.flatten(left) + [e.operands[1]]
            return [e.operands[0], e.operands[1]]
        return [e]

    def unitary(self, e) -> str:
        if isinstance(e, Connective) and e.op != NOT:
            return f"({self.expr(e)})"
        if isinstance(e, Connective) and isinstance(e.operands[0], Equal):
            return f"({self.expr(e)})"  # a != b needs parens inside chains
        if isinstance(e, Quantifier):
            return f"({self.expr(e)})"
        return self.expr(e)

    def quant_body(self, e) -> str:
        if isinstance(e, Connective) and e.op != NOT:
            return f"({self.expr(e)})"
        if isinstance(e, Quantifier):
            return self.expr(e)
        return self.expr(e)

    def side(self, e) -> str:
        # equality sides: boolean-sorted formulas need parentheses
        if isinstance(e, (Connective, Quantifier, Equal)):
            return f"({self.expr(e)})"
        return self.expr(e, term_pos=True)

    def binding(self, b) -> str:
        if isinstance(b, TupleBinding):
            raise ValueError("tuple bindings are not printable as TPTP")
        head = self.symbol_name(b.head)
        if b.params:
            ps = ", ".join(f"{n}:{self.sort(s, True)}" for n, s in b.params)
            head = f"{head}({ps})"
        return f"{head} := {self.expr(b.body, term_pos=sort_of(b.body) != BOOL)}"

    def unit(self, u: AnnotatedUnit) -> str:
        if u.sort_name is not None:
            return f"tff({u.name}, type, {u.sort_name}: $tType)."
        if u.symbol is not None:
            return f"tff({u.name}, type, {self.decl(u.symbol)})."
        return f"tff({u.name}, {u.role}, {self.expr(u.formula)})."

    def render(self) -> str:
        lines = [self.unit(u) for u in self.problem.units]
        if self.show_fool:
            lines.append("tff(bool_sort_def, type, $$bool: $tType).")
            lines.append("tff(true_const_def, type, $$true: $$bool).")
            lines.append("tff(false_const_def, type, $$false: $$bool).")
        return "\n".join(lines) + "\n"


def print_problem(problem: Problem, show_fool: bool = False) -> str:
    return _Printer(problem, show_fool).render()


def format_expr(e: Expression, problem: Optional[Problem] = None) -> str:
    p = problem if problem is not None else Problem([], Signature())
    return _Printer(p, False).expr(e)


# ---------------------------------------------------------------------------
# THF -> TFF syntactic converter
# ---------------------------------------------------------------------------

def thf_to_tff(text: str) -> str:
    """Rewrite THF0 input in the boolean fragment into extended TFF0.

    Keyword thf becomes tff, curried sort arrows become product types and
    application chains become ordinary first-order applications. Lambda
    abstraction and other genuinely higher-order syntax is rejected.
    """
    toks = tokenize(text, "<thf>")
    out: list[str] = []
    i = 0

    def loc(t):
        return f"{t.line}:{t.col}"

    while toks[i].kind != "EOF":
        t = toks[i]
        if t.text in ("^", "!!", "??", "@+", "@-"):
            raise UnsupportedHigherOrderFeature(loc(t))
        if t.text == "thf" and toks[i + 1].text == "(":
            # unit header: thf ( name , role ,
            out.append("tff(")
            i += 2
            while toks[i].text != "," :
                out.append(toks[i].text)
                i += 1
            out.append(", ")
            i += 1
            role = toks[i].text
            out.append(role)
            out.append(", ")
            i += 1
            if toks[i].text != ",":
                raise UnsupportedHigherOrderFeature(loc(toks[i]), "malformed unit")
            i += 1
            # collect body tokens to the closing ").", tracking depth
            depth = 0
            body = []
            while True:
                tt = toks[i]
                if tt.kind == "EOF":
                    raise UnsupportedHigherOrderFeature(loc(tt), "unterminated unit")
                if tt.text == "(":
                    depth += 1
                elif tt.text == ")":
                    if depth == 0:
                        break
                    depth -= 1
                body.append(tt)
                i += 1
            i += 1  # ')'
            if toks[i].text != ".":
                raise UnsupportedHigherOrderFeature(loc(toks[i]), "unterminated unit")
            i += 1
            if role == "type":
                out.append(_convert_type(body))
            else:
                out.append(_convert_formula(body))
            out.append(").\n")
            continue
        raise UnsupportedHigherOrderFeature(loc(t), f"unexpected token {t.text!r}")
    return "".join(out)


def _convert_type(body: list[Token]) -> str:
    # name : s1 > s2 > ... > s  with parenthesized groups opaque
    head = []
    j = 0
    while j < len(body) and body[j].text != ":":
        head.append(body[j].text)
        j += 1
    if j == len(body):
        raise UnsupportedHigherOrderFeature("type declaration without ':'")
    j += 1
    parts: list[list[Token]] = [[]]
    depth = 0
    for t in body[j:]:
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
        if t.text == ">" and depth == 0:
            parts.append([])
            continue
        parts[-1].append(t)
    def render(part):
        if not part:
            raise UnsupportedHigherOrderFeature("<type>", "empty sort")
        if any(p.text == ">" for p in part):
            raise UnsupportedHigherOrderFeature(
                f"{part[0].line}:{part[0].col}",
                "higher-order argument sort")
        s = "".join(p.text for p in part)
        return s[1:-1] if s.startswith("(") and s.endswith(")") else s
    if len(parts) <= 2:
        return "".join(head) + ": " + " > ".join(render(p) for p in parts)
    args = [render(p) for p in parts[:-1]]
    return ("".join(head) + ": (" + " * ".join(args) + ") > " + render(parts[-1]))


def _convert_formula(body: list[Token]) -> str:
    pos = 0

    def peek():
        return body[pos] if pos < len(body) else Token("EOF", "", 0, 0)

    def operand() -> str:
        nonlocal pos
        t = peek()
        if t.text == "(":
            pos += 1
            inner = expr()
            if peek().text != ")":
                raise UnsupportedHigherOrderFeature(f"{t.line}:{t.col}", "unbalanced parentheses")
            pos += 1
            return inner
        if t.text in ("!", "?"):
            # quantifier prefix: ! [ X : sort ] :
            parts = [t.text]
            pos += 1
            if peek().text != "[":
                raise UnsupportedHigherOrderFeature(f"{t.line}:{t.col}", "malformed quantifier")
            while peek().text != "]":
                parts.append(peek().text)
                pos += 1
            parts.append("]")
            pos += 1
            if peek().text != ":":
                raise UnsupportedHigherOrderFeature(f"{t.line}:{t.col}", "malformed quantifier")
            parts.append(":")
            pos += 1
            return " ".join(parts) + " " + operand()
        if t.text == "~":
            pos += 1
            return "~ " + operand()
        if t.text == "^":
            raise UnsupportedHigherOrderFeature(f"{t.line}:{t.col}")
        pos += 1
        s = t.text
        # ordinary first-order application: convert the arguments recursively
        if peek().text == "(":
            pos += 1
            args = [expr()]
            while peek().text == ",":
                pos += 1
                args.append(expr())
            if peek().text != ")":
                raise UnsupportedHigherOrderFeature(f"{t.line}:{t.col}",
                                                    "unbalanced application")
            pos += 1
            s += "(" + ",".join(args) + ")"
        return s

    def application() -> str:
        args = [operand()]
        while peek().text == "@":
            nonlocal pos
            pos += 1
            args.append(operand())
        if len(args) == 1:
            return args[0]
        head = args[0]
        inner_args = args[1:]
        # (f(a)) @ b style heads merge into one application
        if "(" in head and head.endswith(")"):
            fn = head[:head.index("(")]
            prev = head[head.index("(") + 1:-1]
            return f"{fn}({prev},{','.join(inner_args)})"
        return f"{head}({','.join(inner_args)})"

    def expr() -> str:
        nonlocal pos
        parts = [application()]
        while peek().text in ("&", "|", "=>", "<=>", "<~>", "=", "!="):
            parts.append(peek().text)
            pos += 1
            parts.append(application())
        return " ".join(parts)

    converted = expr()
    if pos != len(body):
        t = body[pos]
        raise UnsupportedHigherOrderFeature(f"{t.line}:{t.col}",
                                            f"unexpected token {t.text!r}")
    return converted
