import sys
from pathlib import Path

# Allow running pytest straight from a checkout without installing.
try:
    import breuilmod  # noqa: F401
except ImportError:
    sys.path.insert(0, str(Path(__file__).parent / "src"))
