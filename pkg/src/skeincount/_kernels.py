"""Hot loops: Gauss-code encoding for canonical codes and grid root seeding.

Each kernel is written once as plain python over indexable sequences.  When
numba is available the same source is compiled with ``njit`` and called with
int64/float64 arrays; otherwise the python function runs on lists, which is
faster than element-wise numpy indexing from the interpreter.
"""

import numpy as np

from ._accel import HAVE_NUMBA, njit


def _encode_py(start, nxt, head_c, head_slot, csign, labels, counter, out):
    # Walk one component from `start`, numbering crossings on first visit.
    # Writes passages into `out`; returns (length, new counter).
    e = start
    n = 0
    while True:
        c = head_c[e]
        lab = labels[c]
        if lab < 0:
            lab = counter
            labels[c] = lab
            counter += 1
        out[n] = lab * 4 + head_slot[e] * 2 + (1 if csign[c] > 0 else 0)
        n += 1
        e = nxt[e]
        if e == start:
            break
    return n, counter


def _min_rotation_py(starts, nxt, head_c, head_slot, csign, labels, counter, ties):
    # Lexicographically least encoding over basepoints `starts`.
    # ties[k] is set to 1 for every start reaching the minimum.
    m = len(starts)
    best = [0] * 0
    best_len = -1
    buf = [0] * (4 * len(nxt) + 4)
    for k in range(m):
        ties[k] = 0
    for k in range(m):
        lab = list(labels)
        n, _ = _encode_py(starts[k], nxt, head_c, head_slot, csign, lab, counter, buf)
        if best_len < 0:
            cmp = -1
        else:
            cmp = 0
            for p in range(n):
                if buf[p] != best[p]:
                    cmp = -1 if buf[p] < best[p] else 1
                    break
        if cmp < 0:
            best = buf[:n]
            best_len = n
            for q in range(k):
                ties[q] = 0
            ties[k] = 1
        elif cmp == 0:
            ties[k] = 1
    return best


if HAVE_NUMBA:

    @njit(cache=True)
    def _encode_nb(start, nxt, head_c, head_slot, csign, labels, counter, out):
        e = start
        n = 0
        while True:
            c = head_c[e]
            lab = labels[c]
            if lab < 0:
                lab = counter
                labels[c] = lab
                counter += 1
            out[n] = lab * 4 + head_slot[e] * 2 + (1 if csign[c] > 0 else 0)
            n += 1
            e = nxt[e]
            if e == start:
                break
        return n, counter

    @njit(cache=True)
    def _min_rotation_nb(starts, nxt, head_c, head_slot, csign, labels, counter, ties):
        m = starts.shape[0]
        buf = np.empty(4 * nxt.shape[0] + 4, dtype=np.int64)
        best = np.empty(4 * nxt.shape[0] + 4, dtype=np.int64)
        best_len = -1
        for k in range(m):
            ties[k] = 0
        for k in range(m):
            lab = labels.copy()
            n, _ = _encode_nb(starts[k], nxt, head_c, head_slot, csign, lab, counter, buf)
            cmp = 0
            if best_len < 0:
                cmp = -1
            else:
                for p in range(n):
                    if buf[p] != best[p]:
                        cmp = -1 if buf[p] < best[p] else 1
                        break
            if cmp < 0:
                for p in range(n):
                    best[p] = buf[p]
                best_len = n
                for q in range(k):
                    ties[q] = 0
                ties[k] = 1
            elif cmp == 0:
                ties[k] = 1
        return best[:best_len].copy()

    @njit(cache=True)
    def _sign_cells_nb(f, g):
        # cells (i, j) whose four corners see both f and g change sign (or vanish)
        ni, nj = f.shape
        out = np.empty((ni * nj, 2), dtype=np.int64)
        cnt = 0
        for i in range(ni - 1):
            for j in range(nj - 1):
                fmin = min(min(f[i, j], f[i + 1, j]), min(f[i, j + 1], f[i + 1, j + 1]))
                fmax = max(max(f[i, j], f[i + 1, j]), max(f[i, j + 1], f[i + 1, j + 1]))
                if fmin > 0.0 or fmax < 0.0:
                    continue
                gmin = min(min(g[i, j], g[i + 1, j]), min(g[i, j + 1], g[i + 1, j + 1]))
                gmax = max(max(g[i, j], g[i + 1, j]), max(g[i, j + 1], g[i + 1, j + 1]))
                if gmin > 0.0 or gmax < 0.0:
                    continue
                out[cnt, 0] = i
                out[cnt, 1] = j
                cnt += 1
        return out[:cnt].copy()


def _sign_cells_np(f, g):
    def straddles(h):
        corners = np.stack([h[:-1, :-1], h[1:, :-1], h[:-1, 1:], h[1:, 1:]])
        return (corners.min(axis=0) <= 0.0) & (corners.max(axis=0) >= 0.0)

    return np.argwhere(straddles(f) & straddles(g)).astype(np.int64)


def sign_change_cells(f: np.ndarray, g: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Grid cells where two real constraint functions both straddle zero."""
    f = np.ascontiguousarray(f, dtype=np.float64)
    g = np.ascontiguousarray(g, dtype=np.float64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _sign_cells_nb(f, g)
    return _sign_cells_np(f, g)


class GaussTables:
    """Flat traversal tables for one diagram, in the layout the kernels expect."""

    __slots__ = ("nxt", "head_c", "head_slot", "csign", "use_numba")

    def __init__(self, nxt, head_c, head_slot, csign, use_numba: bool | None = None):
        if use_numba is None:
            use_numba = HAVE_NUMBA
        self.use_numba = bool(use_numba and HAVE_NUMBA)
        if self.use_numba:
            self.nxt = np.asarray(nxt, dtype=np.int64)
            self.head_c = np.asarray(head_c, dtype=np.int64)
            self.head_slot = np.asarray(head_slot, dtype=np.int64)
            self.csign = np.asarray(csign, dtype=np.int64)
        else:
            self.nxt, self.head_c, self.head_slot, self.csign = list(nxt), list(head_c), list(head_slot), list(csign)

    def min_rotation(self, starts, labels):
        """Return (best code tuple, tied starts) for one component."""
        counter = max(labels) + 1 if len(labels) else 0
        counter = max(counter, 0)
        if self.use_numba:
            st = np.asarray(starts, dtype=np.int64)
            lab = np.asarray(labels, dtype=np.int64)
            ties = np.zeros(len(starts), dtype=np.int64)
            best = _min_rotation_nb(st, self.nxt, self.head_c, self.head_slot, self.csign, lab, counter, ties)
            code = tuple(int(x) for x in best)
        else:
            ties = [0] * len(starts)
            best = _min_rotation_py(list(starts), self.nxt, self.head_c, self.head_slot, self.csign, list(labels), counter, ties)
            code = tuple(best)
        return code, [s for s, t in zip(starts, ties) if t]

    def encode(self, start, labels):
        """Encode from one basepoint, updating ``labels`` in place; returns the code tuple."""
        counter = max(labels) + 1 if len(labels) else 0
        counter = max(counter, 0)
        buf = [0] * (4 * len(self.nxt) + 4)
        lab = list(labels)
        n, _ = _encode_py(start, self.nxt, self.head_c, self.head_slot, self.csign, lab, counter, buf)
        labels[:] = lab
        return tuple(buf[:n])
