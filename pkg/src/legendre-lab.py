#!/usr/bin/env python3
"""
Legendre Lab - Command Line

Batch front-end for the operator algebra, boundary forms, domain classifier,
spectral solver and Chisholm-Everitt engine.
Usage: legendre-lab.py [global flags] <subcommand> [options]
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from legendre_core import get_logger
from legendre_core.cli import main as run_cli

logger = get_logger("main")


def main():
    """Main entry point"""
    try:
        sys.exit(run_cli())
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
