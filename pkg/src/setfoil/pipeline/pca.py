"""Two-component PCA projection of candidate sets for shrinkage plots."""

from __future__ import annotations

import numpy as np


def project_pca2(sets) -> dict:
    """Fit PCA on the union of all candidates' CST vectors, project to 2-D.

    Returns per-stage coordinates plus the fitted basis so late-joining
    candidates can be projected consistently.
    """
    vectors = {}
    for dset in sets:
        for c in dset.members:
            vectors.setdefault(c.id, c.cst.as_vector())
    if not vectors:
        return {"stages": {}, "explained_variance": [0.0, 0.0], "mean": [], "components": []}
    ids = list(vectors)
    x = np.array([vectors[i] for i in ids])
    mean = x.mean(axis=0)
    centered = x - mean
    if np.allclose(centered, 0.0):
        components = np.zeros((2, x.shape[1]))
        coords = np.zeros((len(ids), 2))
        variance = [0.0, 0.0]
    else:
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        components = vt[:2]
        if components.shape[0] < 2:
            components = np.vstack([components, np.zeros(x.shape[1])])
            s = np.concatenate([s, [0.0]])
        # Stable sign: the largest-magnitude loading of each component is positive.
        for row in components:
            pivot = np.argmax(np.abs(row))
            if row[pivot] < 0:
                row *= -1.0
        coords = centered @ components.T
        variance = (s[:2] ** 2 / max(len(ids) - 1, 1)).tolist()
        while len(variance) < 2:
            variance.append(0.0)
    by_id = {cid: coords[j].tolist() for j, cid in enumerate(ids)}
    stages = {}
    for dset in sets:
        stages[str(dset.stage)] = {c.id: by_id[c.id] for c in dset.members}
    return {
        "stages": stages,
        "explained_variance": [float(v) for v in variance],
        "mean": mean.tolist(),
        "components": components.tolist(),
    }
