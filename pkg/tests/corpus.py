"""Random rational functions whose denominators are products of torsion binomials."""

import math
import random

from pclab.arith import lcm, totient
from pclab.cyclotomic import as_cyclo, zeta
from pclab.series import MultiPoly, binomial, rational


def _exponent(rng, m, budget):
    while True:
        q = tuple(rng.randint(0, min(2, budget)) for _ in range(m))
        if 0 < sum(q) <= budget:
            return q


def torsion_member(rng, max_phi=8):
    m = rng.randint(1, 3)
    budget = rng.randint(1, 4)
    factors = []
    cond = 1
    while budget > 0 and (not factors or rng.random() < 0.85):
        if factors and rng.random() < 0.3 and sum(factors[-1][1]) <= budget:
            factors.append(factors[-1])
            budget -= sum(factors[-1][1])
            continue
        k = rng.randint(1, 12)
        if totient(lcm(cond, k)) > max_phi:
            continue
        e = rng.choice([e for e in range(max(k, 1)) if math.gcd(e, k) == 1]) if k > 1 else 0
        z = zeta(k, e) if k > 1 else as_cyclo(1)
        q = _exponent(rng, m, budget)
        budget -= sum(q)
        cond = lcm(cond, k)
        factors.append((z, q))
    B = MultiPoly.constant(m, 1)
    for z, q in factors:
        B = B * binomial(m, z, q)
    # numerators 1 or c + x_i with |c| >= 2 share no factor with B
    if rng.random() < 0.5:
        A = MultiPoly.constant(m, 1)
    else:
        c = rng.choice([2, -2, 3, as_cyclo("5/2")])
        A = MultiPoly.constant(m, c) + MultiPoly.variable(m, rng.randint(1, m))
    return rational(A, B), factors


def torsion_corpus(count=24, seed=2024):
    rng = random.Random(seed)
    return [torsion_member(rng) for _ in range(count)]
