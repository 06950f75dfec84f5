"""
Intermediate representation of Rademacher-type formulas.

A formula is a prefactor in n times a sum over cases; each case restricts k,
carries a constant weight, a multiplier product over h and a Bessel kernel.
Expressions are small trees of exact literals, pi, the variables n, k, d and
the operations + - * / integer power and square root.

All models are immutable pydantic models, so JSON is their native format.
"""

import json
from fractions import Fraction
from math import gcd, isqrt
from typing import Any, Dict, Literal, Mapping, Optional, Set, Tuple, Union

import mpmath
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    ValidationError,
    model_validator,
)
from typing_extensions import Annotated

from core.omega import OmegaProductDescriptor
from core.qseries import EtaQuotientSpec
from utils.errors import DomainError, FormulaEvaluationError, FormulaParseError


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("expected a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValueError(f"expected a rational number such as '1/24', got {value!r}")


Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(lambda q: str(q), return_type=str, when_used="json"),
]

Bindings = Mapping[str, Any]


# ---------------------------------------------------------------- expressions

class ExprNode(BaseModel):
    """Base class of expression nodes."""
    model_config = ConfigDict(frozen=True)

    def exact(self, bindings: Bindings) -> Optional[Fraction]:
        """Exact rational value, or None when the subtree is irrational."""
        raise NotImplementedError

    def approx(self, bindings: Bindings) -> mpmath.mpf:
        raise NotImplementedError

    def latex(self) -> str:
        raise NotImplementedError

    def diff(self, var: str) -> "ExprNode":
        raise NotImplementedError

    def variables(self) -> Set[str]:
        return set()

    # Builders
    def __add__(self, other): return BinOp(op="add", left=self, right=lift(other))
    def __radd__(self, other): return BinOp(op="add", left=lift(other), right=self)
    def __sub__(self, other): return BinOp(op="sub", left=self, right=lift(other))
    def __rsub__(self, other): return BinOp(op="sub", left=lift(other), right=self)
    def __mul__(self, other): return BinOp(op="mul", left=self, right=lift(other))
    def __rmul__(self, other): return BinOp(op="mul", left=lift(other), right=self)
    def __truediv__(self, other): return BinOp(op="div", left=self, right=lift(other))
    def __rtruediv__(self, other): return BinOp(op="div", left=lift(other), right=self)
    def __neg__(self): return Neg(arg=self)
    def __pow__(self, exponent: int): return Pow(base=self, exponent=exponent)


def _to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def evaluate(node: "ExprNode", bindings: Bindings) -> mpmath.mpf:
    """Value of a node at the current precision, rational subtrees exactly."""
    q = node.exact(bindings)
    if q is not None:
        return _to_mpf(q)
    return node.approx(bindings)


class IntLit(ExprNode):
    op: Literal["int"] = "int"
    value: int

    def exact(self, bindings):
        return Fraction(self.value)

    def latex(self):
        return str(self.value)

    def diff(self, var):
        return ZERO


class RatLit(ExprNode):
    op: Literal["rat"] = "rat"
    value: Rational

    def exact(self, bindings):
        return self.value

    def latex(self):
        q = self.value
        body = rf"\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"
        return f"-{body}" if q < 0 else body

    def diff(self, var):
        return ZERO


class PiConst(ExprNode):
    op: Literal["pi"] = "pi"

    def exact(self, bindings):
        return None

    def approx(self, bindings):
        return +mpmath.pi

    def latex(self):
        return r"\pi"

    def diff(self, var):
        return ZERO


class Var(ExprNode):
    op: Literal["var"] = "var"
    name: Literal["n", "k", "d"]

    def _value(self, bindings):
        if self.name not in bindings:
            raise FormulaEvaluationError("unbound variable", variable=self.name)
        return bindings[self.name]

    def exact(self, bindings):
        value = self._value(bindings)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return Fraction(value)
        return None

    def approx(self, bindings):
        return mpmath.mpf(self._value(bindings))

    def latex(self):
        return self.name

    def diff(self, var):
        return ONE if self.name == var else ZERO

    def variables(self):
        return {self.name}


class Neg(ExprNode):
    op: Literal["neg"] = "neg"
    arg: "Expr"

    def exact(self, bindings):
        q = self.arg.exact(bindings)
        return None if q is None else -q

    def approx(self, bindings):
        return -evaluate(self.arg, bindings)

    def latex(self):
        return f"-{_wrap(self.arg, 2)}"

    def diff(self, var):
        return _neg(self.arg.diff(var))

    def variables(self):
        return self.arg.variables()


class BinOp(ExprNode):
    op: Literal["add", "sub", "mul", "div"]
    left: "Expr"
    right: "Expr"

    def exact(self, bindings):
        a = self.left.exact(bindings)
        if a is None:
            return None
        b = self.right.exact(bindings)
        if b is None:
            return None
        if self.op == "add":
            return a + b
        if self.op == "sub":
            return a - b
        if self.op == "mul":
            return a * b
        if b == 0:
            raise DomainError("division by zero in expression")
        return a / b

    def approx(self, bindings):
        a = evaluate(self.left, bindings)
        b = evaluate(self.right, bindings)
        if self.op == "add":
            return a + b
        if self.op == "sub":
            return a - b
        if self.op == "mul":
            return a * b
        if b == 0:
            raise DomainError("division by zero in expression")
        return a / b

    def latex(self):
        if self.op == "div":
            return rf"\frac{{{self.left.latex()}}}{{{self.right.latex()}}}"
        if self.op == "add":
            right = self.right.latex()
            if right.startswith("-"):
                return f"{self.left.latex()} - {right[1:]}"
            return f"{self.left.latex()} + {right}"
        if self.op == "sub":
            return f"{self.left.latex()} - {_wrap(self.right, 1)}"
        left, right = _wrap(self.left, 2), _wrap(self.right, 2)
        if right[:1].isdigit() or right.startswith("-"):
            return rf"{left} \cdot {right}"
        return f"{left} {right}"

    def diff(self, var):
        da, db = self.left.diff(var), self.right.diff(var)
        if self.op == "add":
            return _add(da, db)
        if self.op == "sub":
            return _add(da, _neg(db))
        if self.op == "mul":
            return _add(_mul(da, self.right), _mul(self.left, db))
        numerator = _add(_mul(da, self.right), _neg(_mul(self.left, db)))
        if _is_zero(numerator):
            return ZERO
        return BinOp(op="div", left=numerator, right=Pow(base=self.right, exponent=2))

    def variables(self):
        return self.left.variables() | self.right.variables()


class Pow(ExprNode):
    op: Literal["pow"] = "pow"
    base: "Expr"
    exponent: int

    def exact(self, bindings):
        q = self.base.exact(bindings)
        if q is None:
            return None
        if q == 0 and self.exponent < 0:
            raise DomainError("zero raised to a negative power")
        return q ** self.exponent

    def approx(self, bindings):
        value = evaluate(self.base, bindings)
        if value == 0 and self.exponent < 0:
            raise DomainError("zero raised to a negative power")
        return value ** self.exponent

    def latex(self):
        return f"{_wrap(self.base, 3)}^{{{self.exponent}}}"

    def diff(self, var):
        db = self.base.diff(var)
        if _is_zero(db) or self.exponent == 0:
            return ZERO
        lowered = ONE if self.exponent == 1 else Pow(base=self.base, exponent=self.exponent - 1)
        return _mul(_mul(IntLit(value=self.exponent), lowered), db)

    def variables(self):
        return self.base.variables()


class Sqrt(ExprNode):
    op: Literal["sqrt"] = "sqrt"
    arg: "Expr"

    def exact(self, bindings):
        q = self.arg.exact(bindings)
        if q is None:
            return None
        if q < 0:
            raise DomainError("negative radicand", value=str(q))
        num, den = isqrt(q.numerator), isqrt(q.denominator)
        if num * num == q.numerator and den * den == q.denominator:
            return Fraction(num, den)
        return None

    def approx(self, bindings):
        value = evaluate(self.arg, bindings)
        if value < 0:
            raise DomainError("negative radicand", value=mpmath.nstr(value, 15))
        return mpmath.sqrt(value)

    def latex(self):
        return rf"\sqrt{{{self.arg.latex()}}}"

    def diff(self, var):
        da = self.arg.diff(var)
        if _is_zero(da):
            return ZERO
        return BinOp(op="div", left=da, right=_mul(IntLit(value=2), self))

    def variables(self):
        return self.arg.variables()


Expr = Annotated[
    Union[IntLit, RatLit, PiConst, Var, Neg, BinOp, Pow, Sqrt],
    Field(discriminator="op"),
]

for _node in (Neg, BinOp, Pow, Sqrt):
    _node.model_rebuild()


ZERO = IntLit(value=0)
ONE = IntLit(value=1)
PI = PiConst()
N = Var(name="n")
K = Var(name="k")
D = Var(name="d")


def const(value: Union[int, Fraction]) -> ExprNode:
    """Literal for an exact rational."""
    q = Fraction(value)
    if q.denominator == 1:
        return IntLit(value=q.numerator)
    return RatLit(value=q)


def lift(value: Any) -> ExprNode:
    if isinstance(value, ExprNode):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return const(value)
    raise TypeError(f"cannot use {value!r} in an expression")


def sqrt(value: Any) -> ExprNode:
    return Sqrt(arg=lift(value))


def _square_split(n: int) -> Tuple[int, int]:
    """n = s^2 * t with t squarefree."""
    s, t, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            t *= p
        p += 1
    return s, t * n


def surd(value: Union[int, Fraction]) -> ExprNode:
    """
    sqrt(value) for a nonnegative rational, written as r*sqrt(t) with t squarefree.

    Args:
        value: Nonnegative rational

    Returns:
        A literal, sqrt(t) or r*sqrt(t)
    """
    q = Fraction(value)
    if q < 0:
        raise DomainError("negative radicand", value=str(q))
    if q == 0:
        return ZERO
    s, t = _square_split(q.numerator * q.denominator)
    coefficient = Fraction(s, q.denominator)
    if t == 1:
        return const(coefficient)
    root = Sqrt(arg=IntLit(value=t))
    if coefficient == 1:
        return root
    return BinOp(op="mul", left=const(coefficient), right=root)


def linear(alpha: Union[int, Fraction], beta: Union[int, Fraction], var: ExprNode = N) -> ExprNode:
    """alpha*var + beta with the trivial pieces left out."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    term = var if alpha == 1 else BinOp(op="mul", left=const(alpha), right=var)
    if beta == 0:
        return term
    if beta < 0:
        return BinOp(op="sub", left=term, right=const(-beta))
    return BinOp(op="add", left=term, right=const(beta))


def _is_zero(node: ExprNode) -> bool:
    return isinstance(node, IntLit) and node.value == 0


def _is_one(node: ExprNode) -> bool:
    return isinstance(node, IntLit) and node.value == 1


def _add(a: ExprNode, b: ExprNode) -> ExprNode:
    if _is_zero(a):
        return b
    if _is_zero(b):
        return a
    return BinOp(op="add", left=a, right=b)


def _mul(a: ExprNode, b: ExprNode) -> ExprNode:
    if _is_zero(a) or _is_zero(b):
        return ZERO
    if _is_one(a):
        return b
    if _is_one(b):
        return a
    return BinOp(op="mul", left=a, right=b)


def _neg(a: ExprNode) -> ExprNode:
    if _is_zero(a):
        return ZERO
    return Neg(arg=a)


_PRECEDENCE = {"add": 1, "sub": 1, "neg": 2, "mul": 2, "div": 3}


def _wrap(node: ExprNode, level: int) -> str:
    """LaTeX of a child, parenthesized when it binds looser than level."""
    text = node.latex()
    op = getattr(node, "op", "")
    binds = _PRECEDENCE.get(op, 4)
    if op == "div" and level >= 3:
        binds = 0
    if op in ("int", "rat") and text.startswith("-"):
        binds = 1
    if binds < level:
        return rf"\left({text}\right)"
    return text


def eval_expr(e: ExprNode, bindings: Bindings, precision: Optional[int] = None) -> mpmath.mpf:
    """
    Evaluate an expression.

    Args:
        e: Expression
        bindings: Values of the free variables (ints and Fractions stay exact)
        precision: Significant digits; the ambient mpmath precision when omitted

    Returns:
        The value as an mpmath number
    """
    if precision is None:
        return evaluate(e, bindings)
    with mpmath.workdps(precision):
        return evaluate(e, bindings)


# ---------------------------------------------------------------- formulas

class BesselKernel(BaseModel):
    """
    The k-dependent factor of a term.

    bessel_i:         I_order(x)
    sinh_derivative:  d/dn ( sinh(x) / sqrt(radicand) ), order 3/2 only
    with x = coefficient * sqrt(radicand) / k.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["bessel_i", "sinh_derivative"]
    order: Rational
    coefficient: Expr
    radicand: Expr

    @model_validator(mode="after")
    def _check(self) -> "BesselKernel":
        if self.order < 1 or (2 * self.order).denominator != 1:
            raise ValueError("order must be an integer or half-integer >= 1")
        if self.kind == "sinh_derivative" and self.order != Fraction(3, 2):
            raise ValueError("the sinh-derivative kernel has order 3/2")
        if "k" in self.coefficient.variables() or "k" in self.radicand.variables():
            raise ValueError("kernel constants may not depend on k")
        return self

    def latex(self) -> str:
        argument = rf"\frac{{{_wrap(self.coefficient, 2)} \sqrt{{{self.radicand.latex()}}}}}{{k}}"
        if self.kind == "sinh_derivative":
            return (
                rf"\frac{{d}}{{dn}}\left(\frac{{\sinh\left({argument}\right)}}"
                rf"{{\sqrt{{{self.radicand.latex()}}}}}\right)"
            )
        order = self.order
        label = str(order.numerator) if order.denominator == 1 else f"{order.numerator}/{order.denominator}"
        subscript = label if len(label) == 1 else "{" + label + "}"
        return rf"I_{subscript}\left({argument}\right)"


class KRestriction(BaseModel):
    """Which k a case sums over: gcd(k, modulus) = value, or k = value (mod modulus)."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["gcd", "congruence"]
    modulus: int = Field(..., ge=1)
    value: int

    def admits(self, k: int) -> bool:
        if self.kind == "gcd":
            return gcd(k, self.modulus) == self.value
        return k % self.modulus == self.value % self.modulus

    def latex(self) -> str:
        if self.kind == "gcd":
            if self.modulus == 1:
                return r"k \geq 1"
            return rf"(k,{self.modulus})={self.value}"
        if self.modulus == 2 and self.value % 2 == 1:
            return r"2 \nmid k"
        return rf"k \equiv {self.value} \pmod{{{self.modulus}}}"


ALL_K = KRestriction(kind="gcd", modulus=1, value=1)
ODD_K = KRestriction(kind="congruence", modulus=2, value=1)


class FormulaCase(BaseModel):
    """One summand family of a formula."""
    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1)
    restriction: KRestriction
    weight: Expr
    omega_desc: OmegaProductDescriptor
    kernel: BesselKernel
    k_power: Rational

    @model_validator(mode="after")
    def _check(self) -> "FormulaCase":
        if {"n", "k"} & self.weight.variables():
            raise ValueError("case weights may not depend on n or k")
        return self


class RademacherFormula(BaseModel):
    """An exact formula for the coefficients of an eta quotient."""
    model_config = ConfigDict(frozen=True)

    name: str
    symbol: str = "a(n)"
    prefactor: Expr
    cases: Tuple[FormulaCase, ...]
    oracle: EtaQuotientSpec
    status: Literal["transcribed", "conjectured", "verified"] = "transcribed"
    description: str = ""
    weight_display: Optional[str] = None

    @model_validator(mode="after")
    def _check(self) -> "RademacherFormula":
        if not self.cases:
            raise ValueError("a formula needs at least one case")
        if {"k", "d"} & self.prefactor.variables():
            raise ValueError("the prefactor may depend on n only")
        return self


# ---------------------------------------------------------------- serialization

def to_json(f: RademacherFormula) -> str:
    """Canonical JSON encoding."""
    return f.model_dump_json(indent=2)


def _error_path(loc) -> str:
    parts = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(("." if parts else "") + str(item))
    return "".join(parts)


def parse_json_document(text: str) -> Dict[str, Any]:
    """json.loads with syntax errors turned into FormulaParseError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormulaParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise FormulaParseError("expected a JSON object at the top level", line=1, column=1)
    return data


def validate_document(model, data: Dict[str, Any]):
    """Validate parsed JSON against a model, reporting the first failing path."""
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise FormulaParseError(f"schema error: {first['msg']}", path=_error_path(first["loc"])) from exc


def from_json(text: str) -> RademacherFormula:
    """
    Decode a formula.

    Raises:
        FormulaParseError: with line/column for syntax errors, path for schema errors
    """
    return validate_document(RademacherFormula, parse_json_document(text))


# ---------------------------------------------------------------- LaTeX

def _omega_latex(desc: OmegaProductDescriptor) -> str:
    def factor(m: int, e: int) -> str:
        if m == 1:
            body = r"\omega(h,k)"
        else:
            body = rf"\omega\left(\frac{{{m}h}}{{(k,{m})}}, \frac{{k}}{{(k,{m})}}\right)"
        return body if abs(e) == 1 else f"{body}^{{{abs(e)}}}"

    upper = " ".join(factor(t.m, t.e) for t in desc.terms if t.e > 0) or "1"
    lower = " ".join(factor(t.m, t.e) for t in desc.terms if t.e < 0)
    if not lower:
        return upper
    return rf"\frac{{{upper}}}{{{lower}}}"


def _k_power_latex(power: Fraction) -> str:
    if power == 0:
        return ""
    if power == Fraction(1, 2):
        return r"\sqrt{k}"
    if power == Fraction(-1, 2):
        return r"\frac{1}{\sqrt{k}}"
    if power == -1:
        return r"\frac{1}{k}"
    if power == 1:
        return "k"
    return f"k^{{{power}}}"


def case_latex(case: FormulaCase) -> str:
    weight = "" if _is_one(case.weight) else _wrap(case.weight, 2) + " "
    return (
        rf"{weight}\sum_{{\substack{{k \geq 1 \\ {case.restriction.latex()}}}}} "
        rf"{_k_power_latex(case.k_power)} "
        rf"\sum_{{\substack{{0 \leq h < k \\ (h,k)=1}}}} e^{{-2\pi i n h/k}} "
        rf"{_omega_latex(case.omega_desc)} {case.kernel.latex()}"
    )


def to_latex(f: RademacherFormula) -> str:
    """
    Display-math LaTeX for a formula.

    Args:
        f: The formula

    Returns:
        A ``\\begin{equation}`` block
    """
    body = r" \\ &\quad + ".join(case_latex(case) for case in f.cases)
    lines = [
        r"\begin{equation}",
        r"\begin{split}",
        rf"{f.symbol} &= {_wrap(f.prefactor, 2)} \Big( {body} \Big)",
        r"\end{split}",
        r"\end{equation}",
    ]
    if f.weight_display:
        lines.append(f"% case weights: {f.weight_display}")
    return "\n".join(lines)
