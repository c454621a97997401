#!/usr/bin/env python3
"""Exhaustive search for small NOR2/NOR3 decompositions of arithmetic cells.

The builder's hardcoded cell netlists (full adder, conditional add/subtract
slice, conditional negate slice, half adder, 2:1 mux) were produced by this
script. Each gate output costs one initialization cycle plus one gate cycle,
so minimizing gate count minimizes cycles. Inverted copies of loop-invariant
control bits are treated as free leaves because their cost amortizes over the
whole ripple chain.

Run:  python tools/find_gate_decompositions.py [--max-gates N]
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time


def search(n_inputs, leaves, targets, max_gates, time_limit=600.0):
    """IDDFS for a gate list computing every target truth table.

    leaves: dict name -> truth table (int over 2^n_inputs rows).
    targets: dict name -> truth table.
    Returns (gates, node_names) or None; gates are (input_indices...) tuples.
    """
    nrows = 1 << n_inputs
    mask = (1 << nrows) - 1
    leaf_tts = list(leaves.values())
    target_tts = set(targets.values())
    deadline = time.time() + time_limit

    def nor(tts):
        acc = 0
        for t in tts:
            acc |= t
        return ~acc & mask

    for depth in range(1, max_gates + 1):
        visited = {}
        best = None

        def dfs(tts, gates, remaining):
            nonlocal best
            if best is not None:
                return
            missing = len(target_tts - set(tts))
            if missing == 0:
                best = list(gates)
                return
            if missing > remaining or time.time() > deadline:
                return
            key = frozenset(tts)
            if visited.get(key, -1) >= remaining:
                return
            visited[key] = remaining
            n = len(tts)
            seen_new = set()
            for r in (1, 2, 3):
                for combo in itertools.combinations(range(n), r):
                    new = nor([tts[i] for i in combo])
                    if new in seen_new or new in tts:
                        continue
                    seen_new.add(new)
                    tts.append(new)
                    gates.append(combo)
                    dfs(tts, gates, remaining - 1)
                    gates.pop()
                    tts.pop()
                    if best is not None:
                        return

        dfs(list(leaf_tts), [], depth)
        if best is not None:
            return best, list(leaves.keys())
    return None


def tt(fn, n):
    """Truth table int for fn(bits...) over n inputs; input i toggles fastest at i=0."""
    out = 0
    for row in range(1 << n):
        bits = [(row >> i) & 1 for i in range(n)]
        if fn(*bits):
            out |= 1 << row
    return out


def var(i, n):
    return tt(lambda *b: b[i], n)


def report(name, result, targets):
    if result is None:
        print(f"{name}: no decomposition found within limits")
        return
    gates, leaf_names = result
    print(f"{name}: {len(gates)} gates")
    names = list(leaf_names)
    for k, combo in enumerate(gates):
        gname = f"t{k}"
        ins = ", ".join(names[i] for i in combo)
        print(f"  {gname} = NOR({ins})")
        names.append(gname)
    print(f"  targets: {list(targets.keys())} (last gates produce them; "
          f"identify by truth table)")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-gates", type=int, default=7)
    ap.add_argument("--time-limit", type=float, default=900.0)
    args = ap.parse_args()

    n = 3
    a, b, c = (var(i, n) for i in range(3))
    leaves3 = {"a": a, "b": b, "c": c}

    fa_targets = {
        "sum": tt(lambda a, b, c: a ^ b ^ c, n),
        "cout": tt(lambda a, b, c: (a + b + c) >= 2, n),
    }
    t0 = time.time()
    res = search(n, leaves3, fa_targets, args.max_gates, args.time_limit)
    print(f"[{time.time()-t0:.1f}s]", end=" ")
    report("full adder (a+b+c)", res, fa_targets)

    neg_targets = {
        "s": tt(lambda t, k, c: t ^ k ^ c, n),
        "c'": tt(lambda t, k, c: (t ^ k) & c, n),
    }
    t0 = time.time()
    res = search(n, {"t": a, "k": b, "c": c}, neg_targets, args.max_gates,
                 args.time_limit)
    print(f"[{time.time()-t0:.1f}s]", end=" ")
    report("conditional negate slice ((t^k)+c)", res, neg_targets)

    ha_targets = {
        "s": tt(lambda a, c, _: a ^ c, n) ,
        "c'": tt(lambda a, c, _: a & c, n),
    }
    t0 = time.time()
    res = search(n, {"a": a, "c": b}, {k: v for k, v in ha_targets.items()},
                 args.max_gates, args.time_limit)
    print(f"[{time.time()-t0:.1f}s]", end=" ")
    report("half adder (a+c)", res, ha_targets)

    # 4-input conditional subtract slice: s = a ^ (b^k) ^ c, c' = maj(a, b^k, c),
    # with the inverted control bit nk available for free (hoisted).
    n4 = 4
    a4, b4, c4, k4 = (var(i, n4) for i in range(4))
    leaves4 = {"a": a4, "b": b4, "c": c4, "k": k4,
               "nk": ~k4 & ((1 << (1 << n4)) - 1)}
    cs_targets = {
        "s": tt(lambda a, b, c, k: a ^ (b ^ k) ^ c, n4),
        "c'": tt(lambda a, b, c, k: (a + (b ^ k) + c) >= 2, n4),
    }
    t0 = time.time()
    res = search(n4, leaves4, cs_targets, args.max_gates, args.time_limit)
    print(f"[{time.time()-t0:.1f}s]", end=" ")
    report("conditional add/sub slice (a+(b^k)+c)", res, cs_targets)


if __name__ == "__main__":
    sys.exit(main())
