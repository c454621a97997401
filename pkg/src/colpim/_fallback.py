"""Pure-numpy execution backend: word-parallel column ops, one numpy call per op."""

from __future__ import annotations

import numpy as np

_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


def run_ops(words: np.ndarray, gates: np.ndarray, ins: np.ndarray, outs: np.ndarray) -> None:
    for k in range(len(gates)):
        g = gates[k]
        o = outs[k]
        if g == 0:    # INIT0
            words[o] = 0
        elif g == 1:  # INIT1
            words[o] = _ONES
        elif g == 2:  # NOT
            np.bitwise_not(words[ins[k, 0]], out=words[o])
        elif g == 3:  # NOR2
            np.bitwise_or(words[ins[k, 0]], words[ins[k, 1]], out=words[o])
            np.bitwise_not(words[o], out=words[o])
        elif g == 4:  # NOR3
            np.bitwise_or(words[ins[k, 0]], words[ins[k, 1]], out=words[o])
            np.bitwise_or(words[o], words[ins[k, 2]], out=words[o])
            np.bitwise_not(words[o], out=words[o])
        elif g == 5:  # AND2
            np.bitwise_and(words[ins[k, 0]], words[ins[k, 1]], out=words[o])
        elif g == 6:  # OR2
            np.bitwise_or(words[ins[k, 0]], words[ins[k, 1]], out=words[o])
        else:
            raise ValueError(f"unknown gate code {g}")
