"""Reference implementations used only by the tests."""
import mpmath
import numpy as np
from scipy.integrate import quad

PI = np.pi


def lobachevsky_quad(theta: float) -> float:
    """-int_0^theta log(2 sin u) du by adaptive quadrature.

    The integrand is split as log(2 sin u / (u (pi - u))) + log u + log(pi - u);
    the first part is smooth on [0, pi] and the other two integrate in closed form.
    """
    def smooth(u):
        if u == 0.0:
            return np.log(2 / PI)
        if u == PI:
            return np.log(2 / PI)
        return np.log(2 * np.sin(u) / (u * (PI - u)))

    def xlogx(x):
        return x * np.log(x) if x > 0 else 0.0

    part, _ = quad(smooth, 0.0, theta, epsabs=1e-13, epsrel=1e-13, limit=200)
    log_u = xlogx(theta) - theta
    log_pi_u = -(xlogx(PI - theta) - (PI - theta)) + (xlogx(PI) - PI)
    return -(part + log_u + log_pi_u)


def lobachevsky_clausen(theta: float) -> float:
    """Fourier series (1/2) sum sin(2 n theta) / n^2, summed by mpmath."""
    return float(mpmath.clsin(2, 2 * mpmath.mpf(theta)) / 2)


def sine_ratio_gradient(tri, s) -> np.ndarray:
    """Gradient from the closed-form sine products around each w_b.

    exp(-dV/dw_b) = (factor from layer b-1) * (factor from layer b) * (factor from layer b+1):
      layer b:   RR -> sin^2 x / sin^2 z,  LL -> sin^2 y / sin^2 z,  hinge -> sin x sin y / sin^2 z
      layer b-1: letter after it R -> sin y / sin x,  L -> sin x / sin y
      layer b+1: letter before it R -> sin y / sin x,  L -> sin x / sin y
    Missing layers (bridge ends) contribute no factor.
    """
    n = len(tri.layers)
    sn = np.sin(s.angles)

    def row(i):
        if not tri.periodic and not 1 <= i <= n:
            return None
        return sn[tri.layer_position(i)]

    free = range(n) if tri.periodic else range(1, n + 1)
    out = []
    for b in free:
        c = tri.layer(b).context
        x, y, z = row(b)
        if c == "RR":
            logr = 2 * np.log(x) - 2 * np.log(z)
        elif c == "LL":
            logr = 2 * np.log(y) - 2 * np.log(z)
        else:
            logr = np.log(x) + np.log(y) - 2 * np.log(z)
        for nb, letter in ((b - 1, c[0]), (b + 1, c[1])):
            r = row(nb)
            if r is None:
                continue
            x, y, _ = r
            logr += np.log(y) - np.log(x) if letter == "R" else np.log(x) - np.log(y)
        out.append(-tri.multiplicity * logr)
    return np.array(out)
