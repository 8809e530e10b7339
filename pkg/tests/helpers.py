"""Shared helpers for the test suite: series families and radius selection."""

import numpy as np

from tiledrqa import distance, embed

FAMILIES = ("uniform", "sine_noise", "ar1")


def make_series(rng, family, length):
    if family == "uniform":
        return rng.uniform(-1.0, 1.0, length)
    if family == "sine_noise":
        x = np.linspace(0.0, 8.0 * np.pi, length)
        return np.sin(x) + 0.25 * rng.normal(size=length)
    if family == "ar1":
        values = np.empty(length)
        values[0] = rng.normal()
        noise = rng.normal(size=length)
        for i in range(1, length):
            values[i] = 0.9 * values[i - 1] + 0.3 * noise[i]
        return values
    raise ValueError(family)


def radius_for_quantile(rng, embedded, metric, quantile, samples=400):
    """Radius giving roughly the requested recurrence density."""
    if quantile <= 0.0:
        return 0.0
    n = embedded.n_vectors
    ii = rng.integers(0, n, samples)
    jj = rng.integers(0, n, samples)
    dists = [distance(embedded.vector(int(i)), embedded.vector(int(j)), metric)
             for i, j in zip(ii, jj)]
    return float(np.quantile(dists, quantile))


def brute_force_matrix(embedded, settings):
    """Independent full recurrence matrix from scalar distance calls only.

    Deliberately avoids recurrence_block so tests have a second opinion on
    the neighbourhood semantics. Quadratic in scalar calls; keep n small.
    """
    n = embedded.n_vectors
    matrix = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            d = distance(embedded.vector(i), embedded.vector(j),
                         settings.metric)
            matrix[i, j] = d <= settings.radius
    if not settings.include_main_diagonal:
        np.fill_diagonal(matrix, False)
    return matrix


def embed_series(rng, family, length, m, tau):
    data = make_series(rng, family, length)
    return embed(data, m, tau)
