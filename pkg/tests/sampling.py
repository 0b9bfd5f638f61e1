"""Random members of an address space, drawn by walking the decimal automaton."""

import random

from binradix.admissible import build_automaton, member_decimal
from binradix.binstr import Decimal, EpString


def walk(aut, state, n, rng):
    bits = []
    for _ in range(n):
        options = [c for c in "01" if aut.step(state, c) is not None]
        c = rng.choice(options)
        bits.append(c)
        state = aut.step(state, c)
    return "".join(bits), state


def sample_decimals(pair, variant, count, seed=0, max_pre=24, max_per=10, max_point=8):
    """``count`` distinct member decimals; a walk proposes, member_decimal accepts."""
    rng = random.Random(seed)
    aut = build_automaton(pair, variant, leading_zero=True)
    out, seen = [], set()
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 200 * count:
            raise RuntimeError("sampler stalled")
        pre, state = walk(aut, aut.initial, rng.randint(0, max_pre), rng)
        per, _ = walk(aut, state, rng.randint(1, max_per), rng)
        d = Decimal(EpString(pre, per), rng.randint(-1, max_point))
        if d in seen or not member_decimal(d, pair, variant):
            continue
        seen.add(d)
        out.append(d)
    return out
