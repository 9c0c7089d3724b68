"""Dense univariate polynomials over cyclotomic fields, constant term first."""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .cyclotomic import ONE, ZERO, CycloElement, as_cyclo

Poly = List[CycloElement]


def trim(p: Sequence) -> Poly:
    p = [as_cyclo(c) for c in p]
    while len(p) > 1 and p[-1].is_zero():
        p.pop()
    return p or [ZERO]


def degree(p: Poly) -> int:
    p = trim(p)
    return -1 if len(p) == 1 and p[0].is_zero() else len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n)])


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, [-c for c in q])


def mul(p: Poly, q: Poly) -> Poly:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_poly(p: Poly, q: Poly) -> Tuple[Poly, Poly]:
    p, q = trim(p), trim(q)
    dq = degree(q)
    if dq < 0:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    if degree(r) < dq:
        return [ZERO], r
    inv_lead = q[dq].inverse()
    quot = [ZERO] * (len(r) - dq)
    for i in range(len(r) - 1 - dq, -1, -1):
        c = r[i + dq]
        if c.is_zero():
            continue
        c = c * inv_lead
        quot[i] = c
        for j in range(dq + 1):
            if not q[j].is_zero():
                r[i + j] = r[i + j] - c * q[j]
    return trim(quot), trim(r[:dq] if dq > 0 else [ZERO])


def monic(p: Poly) -> Poly:
    p = trim(p)
    if degree(p) < 0:
        return p
    inv = p[-1].inverse()
    return [c * inv for c in p]


def gcd(p: Poly, q: Poly) -> Poly:
    a, b = trim(p), trim(q)
    while degree(b) >= 0:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def evaluate(p: Poly, x) -> CycloElement:
    x = as_cyclo(x)
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def is_constant(p: Poly) -> bool:
    return degree(p) <= 0


def one() -> Poly:
    return [ONE]
