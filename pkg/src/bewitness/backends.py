"""Backend selection for the hot numerical loops.

The compiled extension ``bewitness._core`` is preferred when importable; the
pure-Python twin ``bewitness._core_py`` is the fallback.  Set the environment
variable ``BEWITNESS_BACKEND`` to ``python`` or ``compiled`` to force one side
(``compiled`` raises if the extension is missing).

Both backends expose:

* ``jacobi_eigh(matrix) -> (eigenvalues ascending, eigenvector columns)``
* ``seesaw_extremize(p, d_a, d_b, psi0, phi0, find_max, tol, max_alternations)``
"""

from __future__ import annotations

import os

from bewitness import _core_py

_FORCED = os.environ.get("BEWITNESS_BACKEND", "").strip().lower()

if _FORCED == "python":
    _impl = _core_py
elif _FORCED == "compiled":
    from bewitness import _core as _impl  # noqa: F401  (raises if not built)
else:
    try:
        from bewitness import _core as _impl
    except ImportError:
        _impl = _core_py

BACKEND = "compiled" if _impl is not _core_py else "python"

jacobi_eigh = _impl.jacobi_eigh
seesaw_extremize = _impl.seesaw_extremize


def using_compiled() -> bool:
    return BACKEND == "compiled"
