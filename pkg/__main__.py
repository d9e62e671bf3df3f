#!/usr/bin/env python3
"""
Sparse VAR network toolkit - runnable module
This allows the toolkit to be run as: python -m <checkout directory>
"""

import sys
from pathlib import Path

# Add the current directory to Python path for imports
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))

from sparse_var_network import main  # noqa: E402  pylint: disable=wrong-import-position

if __name__ == "__main__":
    sys.exit(main())
