import numpy as np


class SettleResult(object):
    """ Static equilibrium of a rover on a terrain.

    Attributes
    ----------
    suspension : SuspensionState
    body : BodyState
    contact_heights : ndarray, shape=(n_wheels,)
        Terrain heights the state was solved for.
    contacts : ndarray, shape=(n_wheels, 3)
        World ``(x, y, z)`` of the highest terrain cell under each wheel at
        the settled configuration.
    residual : float
        Largest gap (m) between a wheel and the terrain under it.
    iterations : int
    converged : bool
    clearance : float or None
        Gap between the highest ground under the belly pan and its lowest
        point.
    wheel_names : tuple
    """

    def __init__(self, suspension, body, contact_heights, contacts, residual,
                 iterations, converged, clearance=None, wheel_names=()):
        self.suspension = suspension
        self.body = body
        self.contact_heights = np.asarray(contact_heights, dtype=float)
        self.contacts = np.asarray(contacts, dtype=float)
        self.residual = float(residual)
        self.iterations = int(iterations)
        self.converged = bool(converged)
        self.clearance = clearance
        self.wheel_names = tuple(wheel_names)

    def to_dict(self):
        return {'suspension': self.suspension.to_dict(),
                'body': self.body.to_dict(),
                'contacts': {n: self.contacts[i].tolist()
                             for i, n in enumerate(self.wheel_names)},
                'residual': self.residual,
                'iterations': self.iterations,
                'converged': self.converged,
                'clearance': self.clearance}

    def __repr__(self):
        return "SettleResult(converged=%r, iterations=%d, residual=%.3g)" % (
            self.converged, self.iterations, self.residual)
