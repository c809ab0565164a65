#!/usr/bin/env python3

# Simple wrapper script to run bicrates
import sys
from bicrates.cli import main

if __name__ == "__main__":
    sys.exit(main())
