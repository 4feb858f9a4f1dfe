"""Problem description files.

A config is plain text.  The first non-blank line must be the header
``volterra-config v1``.  After it come sections introduced by ``[name]``
lines, each holding ``key = value`` pairs; ``#`` starts a comment.

    [problem]   name, T, exact (expr in t), g_dt (expr in t)
    [branch]    K, K_dt (exprs in t, s); repeat once per kernel branch
    [curve]     alpha, alpha_dt (exprs in t); repeat once per boundary curve
    [defaults]  r, N, t_eval, epsilon, max_N (all optional)

Branches are listed bottom to top (K_1 next to s = 0), curves in increasing
order.  At least one of ``exact`` and ``g_dt`` is required.
"""
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import ConfigError
from .expr import compile_expression, parse_expression
from .problem import BoundaryCurve, FirstKindProblem, KernelBranch, PiecewiseKernel

HEADER = "volterra-config v1"

_SECTION_KEYS = {
    "problem": {"name", "T", "exact", "g_dt"},
    "branch": {"K", "K_dt"},
    "curve": {"alpha", "alpha_dt"},
    "defaults": {"r", "N", "t_eval", "epsilon", "max_N"},
}
_REPEATABLE = {"branch", "curve"}
_DEFAULT_TYPES = {"r": int, "N": int, "max_N": int, "t_eval": float, "epsilon": float}


@dataclass
class ProblemConfig:
    name: str
    T: float
    branches: List[dict]
    curves: List[dict]
    exact: Optional[str] = None
    g_dt: Optional[str] = None
    defaults: dict = field(default_factory=dict)

    def to_problem(self):
        """Compile the expressions into a :class:`FirstKindProblem`."""
        ts, t = ("t", "s"), ("t",)
        branches = tuple(KernelBranch(compile_expression(b["K"], ts),
                                      compile_expression(b["K_dt"], ts))
                         for b in self.branches)
        curves = tuple(BoundaryCurve(compile_expression(c["alpha"], t),
                                     compile_expression(c["alpha_dt"], t))
                       for c in self.curves)
        kernel = PiecewiseKernel(branches, curves, self.T)
        kernel.check_curves()
        exact = compile_expression(self.exact, t) if self.exact else None
        g_dt = compile_expression(self.g_dt, t) if self.g_dt else None
        return FirstKindProblem(kernel, g_dt=g_dt, exact=exact, name=self.name)

    def to_text(self):
        lines = [HEADER, "", "[problem]", f"name = {self.name}", f"T = {self.T!r}"]
        if self.exact:
            lines.append(f"exact = {self.exact}")
        if self.g_dt:
            lines.append(f"g_dt = {self.g_dt}")
        for b in self.branches:
            lines += ["", "[branch]", f"K = {b['K']}", f"K_dt = {b['K_dt']}"]
        for c in self.curves:
            lines += ["", "[curve]", f"alpha = {c['alpha']}", f"alpha_dt = {c['alpha_dt']}"]
        if self.defaults:
            lines += ["", "[defaults]"] + [f"{k} = {v}" for k, v in self.defaults.items()]
        return "\n".join(lines) + "\n"


def _fail(msg, lineno):
    raise ConfigError(f"line {lineno}: {msg}")


def parse_config(text):
    """Parse config text into a validated :class:`ProblemConfig`."""
    sections = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                _fail(f"expected header {HEADER!r}", lineno)
            seen_header = True
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                _fail("unterminated section header", lineno)
            name = line[1:-1].strip()
            if name not in _SECTION_KEYS:
                _fail(f"unknown section [{name}]", lineno)
            if name not in _REPEATABLE and any(n == name for n, _, _ in sections):
                _fail(f"section [{name}] given twice", lineno)
            sections.append((name, {}, lineno))
            continue
        if "=" not in line:
            _fail("expected key = value", lineno)
        if not sections:
            _fail("key outside any section", lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        name, body, _ = sections[-1]
        if key not in _SECTION_KEYS[name]:
            _fail(f"unknown key {key!r} in [{name}]", lineno)
        if key in body:
            _fail(f"duplicate key {key!r}", lineno)
        if not value:
            _fail(f"empty value for {key!r}", lineno)
        body[key] = (value, lineno)
    if not seen_header:
        raise ConfigError(f"empty config (missing header {HEADER!r})")

    problem = [b for n, b, _ in sections if n == "problem"]
    if not problem:
        raise ConfigError("missing [problem] section")
    problem = problem[0]
    if "T" not in problem:
        raise ConfigError("[problem] needs T")
    try:
        T = float(problem["T"][0])
    except ValueError:
        _fail("T must be a number", problem["T"][1])
    if not T > 0:
        _fail("T must be positive", problem["T"][1])

    def checked(body, keys, variables, where):
        out = {}
        for k in keys:
            if k not in body:
                _fail(f"[{where}] missing {k}", lineno_of(where))
            text, ln = body[k]
            try:
                parse_expression(text, variables)
            except ConfigError as exc:
                _fail(f"{k}: {exc}", ln)
            out[k] = text
        return out

    def lineno_of(where):
        return next(ln for n, _, ln in sections if n == where)

    branches = [checked(b, ("K", "K_dt"), ("t", "s"), "branch")
                for n, b, _ in sections if n == "branch"]
    curves = [checked(c, ("alpha", "alpha_dt"), ("t",), "curve")
              for n, c, _ in sections if n == "curve"]
    if not branches:
        raise ConfigError("need at least one [branch]")
    if len(branches) != len(curves) + 1:
        raise ConfigError(f"{len(branches)} branches need {len(branches) - 1} curves, "
                          f"got {len(curves)}")
    extra = {}
    for k in ("exact", "g_dt"):
        if k in problem:
            extra[k] = checked(problem, (k,), ("t",), "problem")[k]
    if not extra:
        raise ConfigError("[problem] needs exact or g_dt")

    defaults = {}
    for n, body, _ in sections:
        if n != "defaults":
            continue
        for k, (v, ln) in body.items():
            try:
                defaults[k] = _DEFAULT_TYPES[k](v)
            except ValueError:
                _fail(f"bad value for {k}: {v!r}", ln)

    name = problem.get("name", ("problem", 0))[0]
    return ProblemConfig(name, T, branches, curves, extra.get("exact"), extra.get("g_dt"),
                         defaults)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


EXAMPLE1 = ProblemConfig(
    name="example1", T=1.0,
    branches=[{"K": "t + s", "K_dt": "1"}, {"K": "t*s", "K_dt": "s"},
              {"K": "exp(s)", "K_dt": "0"}],
    curves=[{"alpha": "t/2", "alpha_dt": "1/2"}, {"alpha": "2*t/3", "alpha_dt": "2/3"}],
    exact="t*sin(t)",
)

EXAMPLE2 = ProblemConfig(
    name="example2", T=2.0,
    branches=[{"K": "(t - s)^2", "K_dt": "2*(t - s)"}, {"K": "cos(s)", "K_dt": "0"},
              {"K": "1 + sin(2*s)", "K_dt": "0"}],
    curves=[{"alpha": "t/3", "alpha_dt": "1/3"}, {"alpha": "3*t/4", "alpha_dt": "3/4"}],
    exact="exp(2 - t)*t^2",
)

BUILTIN_CONFIGS = {"example1": EXAMPLE1, "example2": EXAMPLE2}
