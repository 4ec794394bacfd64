# !/usr/bin/env python3
"""
Main entry point for raidlay
"""
import sys

from src.cli import main
from src.utils.log import init_logging

if __name__ == "__main__":
    init_logging()
    sys.exit(main())
