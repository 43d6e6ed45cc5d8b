"""Camera tampering detection: detectors, synthetic scenarios and evaluation."""

from ._camtamper import *  # noqa: F401,F403
from ._camtamper import __doc__  # noqa: F401
