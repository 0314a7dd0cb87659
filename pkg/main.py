"""
Extra entry point to run the program w/o the -m flag
"""

import asyncio
import sys

import prodhyp


if __name__ == "__main__":
    sys.exit(asyncio.run(prodhyp.main()))
