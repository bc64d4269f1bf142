"""segfuse: instance/semantic segmentation fusion and evaluation.

The heavy lifting lives in the compiled extension; this package re-exports
its surface. Masks and score maps convert to and from numpy arrays indexed
[y, x].
"""

from ._segfuse import *  # noqa: F401,F403
from ._segfuse import __version__  # noqa: F401
