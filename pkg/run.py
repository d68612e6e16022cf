#!/usr/bin/env python3
"""
Phase-only compressive sensing - entry point.

Starts the ``pocs`` command-line interface from the repository root without
installing the package. All functionality lives in src/phase_only_cs/.
"""

import sys
from pathlib import Path

# Add the src directory to the Python path
project_root = Path(__file__).parent
src_path = project_root / "src"
sys.path.insert(0, str(src_path))


def main():
    """Main entry point."""
    try:
        from phase_only_cs.presentation.cli.main import main as cli_main
    except ImportError as e:
        print(f"Failed to import the application: {e}")
        print("\nMake sure the dependencies are installed:")
        print("  pip install -r requirements.txt")
        sys.exit(1)
    cli_main()


if __name__ == "__main__":
    main()
