"""Weighted Bergman / boundary kernel laboratory on planar domains.

The compiled core lives in ``kerlab._kerlab``; this package re-exports the
main operations and adds a small JSON-config convenience wrapper.
"""

import json

try:  # installed wheel layout: the extension lives inside the package
    from ._kerlab import (  # noqa: F401
        Domain,
        bergman_kernel,
        conjugate_hardy,
        harmonic_flux,
        run_json,
        szego_kernel,
        __version__,
    )
except ImportError:  # in-tree build: the extension sits on sys.path
    from _kerlab import (  # noqa: F401
        Domain,
        bergman_kernel,
        conjugate_hardy,
        harmonic_flux,
        run_json,
        szego_kernel,
        __version__,
    )


def run(config):
    """Run a config document (dict or JSON string).

    Returns (exit_code, report, error) with the report parsed back to Python.
    """
    text = config if isinstance(config, str) else json.dumps(config)
    code, report_text, error = run_json(text)
    report = json.loads(report_text) if report_text else None
    return code, report, error
