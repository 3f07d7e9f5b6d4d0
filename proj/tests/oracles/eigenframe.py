"""Eigenframe oracle for symmetric 2x2 and 3x3 forms.

Uses numpy's symmetric eigensolver (independent of the Jacobi rotations in the
library) and prints eigenvalues in ascending order with their unit
eigenvectors, sign-normalized so the first nonzero entry is positive. The
output is frozen in tests/golden/eigenframe.csv.
"""
import numpy as np

forms = {
    "swap": [[0.0, 1.0], [1.0, 0.0]],
    "diag": [[1.0, 0.0], [0.0, -1.0]],
    "mixed3": [[2.0, 1.0, 0.0], [1.0, -1.0, 0.5], [0.0, 0.5, 0.0]],
}

print("form,index,lambda,v0,v1,v2")
for name, matrix in forms.items():
    a = np.array(matrix)
    values, vectors = np.linalg.eigh(a)
    for i, lam in enumerate(values):
        v = vectors[:, i]
        lead = next(x for x in v if abs(x) > 1e-12)
        v = v * np.sign(lead)
        cells = [f"{x:.15g}" for x in v] + [""] * (3 - len(v))
        print(f"{name},{i},{lam:.15g},{','.join(cells)}")
