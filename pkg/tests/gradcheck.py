"""Finite-difference gradient oracle shared by the unit and acceptance tests."""

import numpy as np

from chromagraph.nn import mae_and_grad


def fd_check(model, x, y, rng, max_coords=6, step=1e-5, rel_tol=1e-4):
    """Central finite differences vs analytic gradients on sampled coordinates.

    These networks are piecewise linear in any single weight, so the forward
    and backward one-sided differences agree exactly unless an activation or
    residual kink lies inside the +-step window; such coordinates are skipped
    (the loss has no derivative there to compare against). Returns the number
    of coordinates actually checked.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    def loss():
        return float(np.mean(np.abs(model.forward_batch(x) - y)))

    base = loss()
    pred = model.forward_batch(x)
    _, dpred = mae_and_grad(pred, y)
    grads = model.backward_batch(dpred)
    params = model.params
    assert len(grads) == len(params)
    checked = 0
    sampled = 0
    for p, g in zip(params, grads):
        assert g.shape == p.shape
        flat_idx = rng.choice(p.size, size=min(p.size, max_coords), replace=False)
        for fi in flat_idx:
            sampled += 1
            idx = np.unravel_index(fi, p.shape)
            orig = p[idx]
            p[idx] = orig + step
            lp = loss()
            p[idx] = orig - step
            lm = loss()
            p[idx] = orig
            d_fwd = (lp - base) / step
            d_bwd = (base - lm) / step
            if abs(d_fwd - d_bwd) > 1e-3 * max(abs(d_fwd), abs(d_bwd), 1e-8):
                continue  # kink inside the window
            fd = (lp - lm) / (2 * step)
            analytic = g[idx]
            if max(abs(fd), abs(analytic)) < 1e-7:
                checked += 1  # both at the FD noise floor: dead coordinate
                continue
            denom = max(abs(fd), abs(analytic), 1e-8)
            assert abs(fd - analytic) / denom <= rel_tol, (
                f"grad mismatch at {idx}: fd={fd} analytic={analytic}"
            )
            checked += 1
    assert checked >= max(1, sampled // 2), f"only {checked}/{sampled} coordinates were checkable"
    return checked
