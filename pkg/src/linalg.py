"""
Exact linear algebra over Q on Fraction vectors.
"""

from fractions import Fraction


class EchelonBasis:
    """
    Row-echelon basis of a subspace of Q^dim, grown one vector at a time.

    Every stored row remembers its expression in the inserted vectors, so
    membership tests also return coordinates with respect to them.
    """

    def __init__(self, dim):
        self.dim = dim
        self.rows = []  # (pivot, row, combination over inserted vectors)
        self.inserted = 0

    def __len__(self):
        return len(self.rows)

    def _reduce(self, vector):
        r = [Fraction(v) for v in vector]
        if len(r) != self.dim:
            raise ValueError(f"expected a vector of length {self.dim}, got {len(r)}")
        coords = [Fraction(0)] * self.inserted
        for pivot, row, combo in self.rows:
            c = r[pivot]
            if not c:
                continue
            for j in range(pivot, self.dim):
                if row[j]:
                    r[j] -= c * row[j]
            for j, w in enumerate(combo):
                if w:
                    coords[j] += c * w
        return r, coords

    def solve(self, vector):
        """Coordinates of vector over the inserted vectors, or None outside the span"""
        r, coords = self._reduce(vector)
        if any(r):
            return None
        return coords

    def insert(self, vector):
        """
        Add a vector
        Returns:
            None if it was independent, else its coordinates over the earlier vectors
        """
        r, coords = self._reduce(vector)
        pivot = next((j for j, v in enumerate(r) if v), None)
        if pivot is None:
            return coords
        inv = 1 / r[pivot]
        row = [v * inv for v in r]
        # row = (new - sum coords_i * old_i) / r[pivot]
        combo = [-c * inv for c in coords] + [inv]
        for _, _, old_combo in self.rows:
            old_combo.append(Fraction(0))
        self.rows.append((pivot, row, combo))
        self.inserted += 1
        return None
