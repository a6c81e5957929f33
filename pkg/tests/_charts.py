"""Seeded random null charts shared by the property tests."""
from __future__ import annotations

from lgsurf.errors import LgsurfError
from lgsurf.expr import EvalError, parse
from lgsurf.nullparam import ruled_recipe, solve_null_jet, solve_on_line
from lgsurf.quadric import surface_type_at


def ruled_f(rng):
    a, b, c = rng.uniform(0.3, 1.2), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)
    return f"exp({a!r}*t) + {b!r}*t^3 + {c!r}*t^2", float(rng.uniform(-0.5, 0.5))


def generic_f(rng):
    """f with f' > 0 on t > 0 and f'' != 0 generically."""
    k, a, b = rng.uniform(0.5, 2.0), rng.uniform(0.2, 1.0), rng.uniform(0.1, 1.0)
    return f"{k!r}*exp({a!r}*t) + {b!r}*t^3", float(rng.uniform(0.3, 1.2))


def random_implicit(rng):
    """A polynomial perturbation of r t - s^2 + 1 (hyperbolic near (1, 0, -1))."""
    mons = ["r*s", "s*t", "t^2", "r^2", "s^3", "t^3", "r*t*s", "s^2*t"]
    terms = " + ".join(f"{rng.uniform(-0.3, 0.3)!r}*{m}" for m in rng.choice(mons, 3, replace=False))
    return f"r*t - s^2 + 1 + {terms}"


def recipe_chart(rng, order=7):
    if rng.random() < 0.5:
        f, t0 = ruled_f(rng)
        return ruled_recipe("s_of_t", parse(f), t0, order)
    f, t0 = generic_f(rng)
    return ruled_recipe("r_of_t", parse(f), t0, order)


def implicit_chart(rng, order=7, tries=20):
    """(F, chart) from solve_null_jet at a hyperbolic point of a random implicit surface."""
    for _ in range(tries):
        F = parse(random_implicit(rng))
        start = [1.0 + rng.normal(scale=0.2), rng.normal(scale=0.2), -1.0 + rng.normal(scale=0.2)]
        try:
            start[1] = solve_on_line(F, start, "s") if rng.random() < 0.3 else start[1]
            start[0] = solve_on_line(F, start, "r")
            if surface_type_at(F, start) != "hyperbolic":
                continue
            return F, solve_null_jet(F, start, order)
        except (LgsurfError, EvalError, ArithmeticError, ValueError):
            continue
    raise RuntimeError("no hyperbolic sample found")


def random_chart(rng, order=7):
    return recipe_chart(rng, order) if rng.random() < 0.5 else implicit_chart(rng, order)[1]
