"""Grid evaluation kernels, with optional numba acceleration.

The O(n^2) inner loops live here. Each kernel has a pure-numpy implementation
and, when numba imports, an @njit twin. Selection happens once at import:
set BIPHOTON_DISABLE_NUMBA=1 to force the numpy path. Both paths are exported
for the benchmark and the equivalence tests.

Convention used by all kernels: the 1-D arrays ks, ki hold wavenumbers on the
signal/idler detuning axes nu_j = (j - n/2) dnu, and kp_sum holds the pump
wavenumber on the 2n-1 possible sums, kp_sum[m] = k_p at detuning (m - n) dnu,
so k_p(nu_s + nu_i) is kp_sum[j + k]. Phases follow the forward convention
exp(+i L (k_s + k_i - k_p) / 2).
"""

import os

import numpy as np

_DISABLE = os.environ.get("BIPHOTON_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - mirror always ships numba
    numba = None
    HAVE_NUMBA = False

USING_NUMBA = HAVE_NUMBA and not _DISABLE


# ---------------------------------------------------------------- numpy path


def phasematching_numpy(kp_sum, ks, ki, length):
    """Complex sinc phasematching on the grid: sinc(x) e^{ix}, x = L D / 2."""
    n = ks.shape[0]
    idx = np.arange(n)
    d = ks[:, None] + ki[None, :] - kp_sum[idx[:, None] + idx[None, :]]
    x = 0.5 * length * d
    return np.sinc(x / np.pi) * np.exp(1j * x)


def assembly_numpy(kp_sum, ks, ki, qp_sum, qs, qi, length, spacer, ncryst):
    """N-crystal phasematching: exact geometric sum times the single sinc."""
    n = ks.shape[0]
    idx = np.arange(n)
    jk = idx[:, None] + idx[None, :]
    dc = ks[:, None] + ki[None, :] - kp_sum[jk]
    dsp = qs[:, None] + qi[None, :] - qp_sum[jk]
    x = 0.5 * length * dc
    single = np.sinc(x / np.pi) * np.exp(1j * x)
    if ncryst == 1:
        return single
    phi = length * dc + spacer * dsp
    half = 0.5 * phi
    s = np.sin(half)
    num = np.sin(ncryst * half)
    # removable singularity at phi = 2 pi m: ratio -> N (-1)^{m (N-1)}.
    # half can sit near a large multiple of pi, where sin resolves no finer
    # than ~ulp(half), so anything below 1e-9 must take the limit branch
    m = np.rint(phi / (2.0 * np.pi))
    sign = np.where((np.int64(ncryst - 1) * m.astype(np.int64)) % 2 == 0, 1.0, -1.0)
    ratio = np.where(np.abs(s) < 1e-9, ncryst * sign, num / np.where(s == 0, 1.0, s))
    return ratio * np.exp(1j * (ncryst - 1) * half) * single


def gaussian_model_numpy(nu, sigma, beta_t, tau_s, tau_i, beta_s, beta_i, beta_p):
    """Gaussian-approximated amplitude on the square grid spanned by nu."""
    gamma = 0.193
    vs = nu[:, None]
    vi = nu[None, :]
    vsum = vs + vi
    lin = tau_s * vs + tau_i * vi
    logmag = -((vsum / sigma) ** 2) - 0.25 * gamma * lin**2
    phase = beta_t * vsum**2 + 0.5 * (lin + beta_s * vs**2 + beta_i * vi**2 + beta_p * vs * vi)
    return np.exp(logmag + 1j * phase)


# ---------------------------------------------------------------- loop path


def _phasematching_loop(kp_sum, ks, ki, length):
    n = ks.shape[0]
    out = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            d = ks[j] + ki[k] - kp_sum[j + k]
            x = 0.5 * length * d
            if x == 0.0:
                s = 1.0
            else:
                s = np.sin(x) / x
            out[j, k] = s * (np.cos(x) + 1j * np.sin(x))
    return out


def _assembly_loop(kp_sum, ks, ki, qp_sum, qs, qi, length, spacer, ncryst):
    n = ks.shape[0]
    out = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            dc = ks[j] + ki[k] - kp_sum[j + k]
            x = 0.5 * length * dc
            if x == 0.0:
                s = 1.0
            else:
                s = np.sin(x) / x
            single = s * (np.cos(x) + 1j * np.sin(x))
            if ncryst == 1:
                out[j, k] = single
                continue
            phi = length * dc + spacer * (qs[j] + qi[k] - qp_sum[j + k])
            half = 0.5 * phi
            sd = np.sin(half)
            # same limit-branch threshold as the vectorized path: below 1e-9
            # the computed sd is dominated by ulp noise of the large argument
            if abs(sd) < 1e-9:
                m = int(np.rint(phi / (2.0 * np.pi)))
                ratio = float(ncryst) if ((ncryst - 1) * m) % 2 == 0 else -float(ncryst)
            else:
                ratio = np.sin(ncryst * half) / sd
            ang = (ncryst - 1) * half
            out[j, k] = ratio * (np.cos(ang) + 1j * np.sin(ang)) * single
    return out


def _gaussian_model_loop(nu, sigma, beta_t, tau_s, tau_i, beta_s, beta_i, beta_p):
    gamma = 0.193
    n = nu.shape[0]
    out = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        vs = nu[j]
        for k in range(n):
            vi = nu[k]
            vsum = vs + vi
            lin = tau_s * vs + tau_i * vi
            logmag = -((vsum / sigma) ** 2) - 0.25 * gamma * lin * lin
            phase = beta_t * vsum * vsum + 0.5 * (
                lin + beta_s * vs * vs + beta_i * vi * vi + beta_p * vs * vi
            )
            out[j, k] = np.exp(logmag) * (np.cos(phase) + 1j * np.sin(phase))
    return out


if HAVE_NUMBA:
    phasematching_numba = numba.njit(cache=True)(_phasematching_loop)
    assembly_numba = numba.njit(cache=True)(_assembly_loop)
    gaussian_model_numba = numba.njit(cache=True)(_gaussian_model_loop)

if USING_NUMBA:
    phasematching_kernel = phasematching_numba
    assembly_kernel = assembly_numba
    gaussian_model_kernel = gaussian_model_numba
else:
    phasematching_kernel = phasematching_numpy
    assembly_kernel = assembly_numpy
    gaussian_model_kernel = gaussian_model_numpy


def warmup():
    """Trigger JIT compilation of the selected kernels on tiny inputs."""
    nu = np.array([-1.0, 1.0])
    k1 = np.array([1.0, 1.1])
    ksum = np.array([2.0, 2.1, 2.2])
    phasematching_kernel(ksum, k1, k1, 10.0)
    assembly_kernel(ksum, k1, k1, ksum, k1, k1, 10.0, 5.0, 3)
    gaussian_model_kernel(nu, 1.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0)
