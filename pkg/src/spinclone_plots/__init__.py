"""Figure regeneration from the spinclone CLI's CSV outputs.

This layer never recomputes physics: it plots CSV columns as-is (plus any
analytic bound values already present as columns or sidecar metadata).
"""

__version__ = "0.1.0"
