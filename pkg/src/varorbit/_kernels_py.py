"""Pure-numpy evaluation kernels (fallback when the compiled core is absent).

Both backends expose the same two functions operating on a batch of sampled
configurations with shape (m, n, d):

    potential_batch(samples, masses, alpha)       -> (U, mindist)
    potential_grad_batch(samples, masses, alpha)  -> (U, G, mindist)

U and mindist have shape (m,); G has shape (m, n, d) and holds the
mass-metric gradient of the potential, i.e. block j is
(1/m_j) * dU/dq_j.
"""
import numpy as np


def _pair_indices(n):
    iu = np.triu_indices(n, k=1)
    return iu[0], iu[1]


def potential_batch(samples, masses, alpha):
    samples = np.asarray(samples, dtype=float)
    m, n, d = samples.shape
    ii, jj = _pair_indices(n)
    diff = samples[:, ii, :] - samples[:, jj, :]          # (m, p, d)
    dist = np.sqrt(np.einsum("mpd,mpd->mp", diff, diff))  # (m, p)
    mindist = dist.min(axis=1) if dist.size else np.full(m, np.inf)
    with np.errstate(divide="ignore"):
        U = np.einsum("p,mp->m", masses[ii] * masses[jj], dist ** (-alpha))
    return U, mindist


def potential_grad_batch(samples, masses, alpha):
    samples = np.asarray(samples, dtype=float)
    m, n, d = samples.shape
    ii, jj = _pair_indices(n)
    diff = samples[:, ii, :] - samples[:, jj, :]
    dist2 = np.einsum("mpd,mpd->mp", diff, diff)
    dist = np.sqrt(dist2)
    mindist = dist.min(axis=1) if dist.size else np.full(m, np.inf)
    mm = masses[ii] * masses[jj]
    with np.errstate(divide="ignore"):
        U = np.einsum("p,mp->m", mm, dist ** (-alpha))
        # dU/dq_i = -alpha * m_i m_j (q_i - q_j) / r^(alpha+2), summed over j
        coef = -alpha * mm[None, :] * dist ** (-(alpha + 2.0))  # (m, p)
    pair_force = coef[:, :, None] * diff                        # (m, p, d)
    dU = np.zeros_like(samples)
    np.add.at(dU, (slice(None), ii), pair_force)
    np.add.at(dU, (slice(None), jj), -pair_force)
    G = dU / masses[None, :, None]
    return U, G, mindist
