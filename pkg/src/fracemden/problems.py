"""Problem-file ingestion and the built-in benchmark problems.

A problem file is UTF-8 text (LF or CRLF) of ``key = value`` lines.  ``#``
starts a comment anywhere outside a quoted string.  Expression values are
double-quoted; numeric values are bare.  Keys:

    alpha     real in (1/2, 1]          required
    lambda    real >= 0                 required
    s         expression in x, quoted   required
    g         expression in u, quoted   required
    h         expression in x, quoted   required
    a         real, u(0)                required
    b         real, D^alpha u(0)        required
    N         integer degree bound      required
    exact     expression in x, quoted   optional
    tol       real                      optional
    max_iters integer                   optional

Unknown keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr
from .solver import EmdenFowlerProblem

REQUIRED_KEYS = ("alpha", "lambda", "s", "g", "h", "a", "b", "N")
OPTIONAL_KEYS = ("exact", "tol", "max_iters")
_EXPR_KEYS = {"s", "g", "h", "exact"}


class ProblemFileError(Exception):
    """Malformed problem file; carries the 1-based line number (0 = whole file)."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class ProblemSpec:
    """Parsed problem file: the problem plus solver settings."""

    problem: EmdenFowlerProblem
    N: int
    tol: float | None = None
    max_iters: int | None = None


def _strip_comment(line: str) -> str:
    out = []
    quoted = False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def parse_problem_text(text: str) -> ProblemSpec:
    values: dict[str, str] = {}
    is_quoted: dict[str, bool] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if "=" not in line:
            raise ProblemFileError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise ProblemFileError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ProblemFileError(f"duplicate key {key!r}", lineno)
        if value.startswith('"'):
            if not (len(value) >= 2 and value.endswith('"')):
                raise ProblemFileError(f"unterminated quote in value for {key!r}", lineno)
            values[key] = value[1:-1]
            is_quoted[key] = True
        else:
            values[key] = value
            is_quoted[key] = False

    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ProblemFileError(f"missing required key(s): {', '.join(missing)}")

    for key in _EXPR_KEYS:
        if key in values and not is_quoted[key]:
            raise ProblemFileError(f"value for {key!r} must be a quoted expression")

    def real(key: str) -> float:
        try:
            return float(values[key])
        except ValueError:
            raise ProblemFileError(f"value for {key!r} is not a number: {values[key]!r}") from None

    def integer(key: str) -> int:
        try:
            return int(values[key])
        except ValueError:
            raise ProblemFileError(f"value for {key!r} is not an integer: {values[key]!r}") from None

    def expression(key: str, var: str):
        try:
            return expr.parse(values[key], {var})
        except expr.ParseError as err:
            raise ProblemFileError(f"bad expression for {key!r}: {err}") from None

    try:
        problem = EmdenFowlerProblem(
            alpha=real("alpha"),
            lam=real("lambda"),
            s=expression("s", "x"),
            g=expression("g", "u"),
            h=expression("h", "x"),
            a=real("a"),
            b=real("b"),
            exact=expression("exact", "x") if "exact" in values else None,
        )
    except ValueError as err:
        raise ProblemFileError(str(err)) from None

    return ProblemSpec(
        problem=problem,
        N=integer("N"),
        tol=real("tol") if "tol" in values else None,
        max_iters=integer("max_iters") if "max_iters" in values else None,
    )


def parse_problem_file(path) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem_text(fh.read())


# -- built-in benchmark problems --------------------------------------------
#
# All four have known closed-form solutions, which makes them the
# reproduction and regression suite.  Fractional variants take the order as
# a parameter and inline it into the expression strings.


def _fmt(v: float) -> str:
    return repr(float(v))


def lane_emden(n: int, alpha: float = 1.0) -> EmdenFowlerProblem:
    """D^(2a)u + (2/x^a) D^(a)u + u^n = 0, u(0)=1, D^(a)u(0)=0
    (isothermal-sphere family).

    At a = 1 the exact solutions are known for n=0 (1 - x^2/6),
    n=1 (sin(x)/x) and n=5 ((1 + x^2/3)^(-1/2)); fractional orders have
    no closed form here, so no exact field is attached.
    """
    exact = None
    if alpha == 1.0:
        exact = {
            0: "1 - x^2/6",
            1: "sin(x)/x",
            5: "(1 + x^2/3)^(-0.5)",
        }.get(n)
    g = "1" if n == 0 else ("u" if n == 1 else f"u^{n}")
    return EmdenFowlerProblem(
        alpha=alpha,
        lam=2.0,
        s=expr.parse("1", {"x"}),
        g=expr.parse(g, {"u"}),
        h=expr.parse("0", {"x"}),
        a=1.0,
        b=0.0,
        exact=None if exact is None else expr.parse(exact, {"x"}),
    )


def shifted_power(alpha: float) -> EmdenFowlerProblem:
    """Linear problem with exact solution 3 + x^(2 alpha).

    D^(2a)u + (1/x^a) D^(a)u + (1 + x^a) u = h with h chosen so the power
    solution is exact; u(0)=3, D^(a)u(0)=0.
    """
    a1, a2 = _fmt(alpha), _fmt(2 * alpha)
    h_src = (
        f"gamma(1 + {a2}) + gamma(1 + {a2})/gamma(1 + {a1})"
        f" + (1 + x^{a1})*(3 + x^{a2})"
    )
    return EmdenFowlerProblem(
        alpha=alpha,
        lam=1.0,
        s=expr.parse(f"1 + x^{a1}", {"x"}),
        g=expr.parse("u", {"u"}),
        h=expr.parse(h_src, {"x"}),
        a=3.0,
        b=0.0,
        exact=expr.parse(f"3 + x^{a2}", {"x"}),
    )


def exp_square() -> EmdenFowlerProblem:
    """u'' + (2/x) u' - 2(2x^2+3) u = 0 with exact solution exp(x^2)."""
    return EmdenFowlerProblem(
        alpha=1.0,
        lam=2.0,
        s=expr.parse("-2*(2*x^2 + 3)", {"x"}),
        g=expr.parse("u", {"u"}),
        h=expr.parse("0", {"x"}),
        a=1.0,
        b=0.0,
        exact=expr.parse("exp(x^2)", {"x"}),
    )


def mixed_power(alpha: float) -> EmdenFowlerProblem:
    """Linear problem with exact solution 1 + x^(2 alpha) + x^(3 alpha).

    D^(2a)u + (1/x^a) D^(a)u - 9u = h; u(0)=1, D^(a)u(0)=0.  (The exact
    solution pins u(0) = 1; see the reproduction notes on the published
    initial value.)
    """
    a1, a2, a3 = _fmt(alpha), _fmt(2 * alpha), _fmt(3 * alpha)
    h_src = (
        f"-9 + gamma(1 + {a2})/gamma(1 + {a1}) + gamma(1 + {a2})"
        f" + (gamma(1 + {a3})/gamma(1 + {a1})"
        f" + gamma(1 + {a3})/gamma(1 + {a2}))*x^{a1}"
        f" - 9*x^{a2} - 9*x^{a3}"
    )
    return EmdenFowlerProblem(
        alpha=alpha,
        lam=1.0,
        s=expr.parse("-9", {"x"}),
        g=expr.parse("u", {"u"}),
        h=expr.parse(h_src, {"x"}),
        a=1.0,
        b=0.0,
        exact=expr.parse(
            f"1 + x^{_fmt(2 * alpha)} + x^{_fmt(3 * alpha)}", {"x"}
        ),
    )
