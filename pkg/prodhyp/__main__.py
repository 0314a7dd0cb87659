"""
Entry point
"""

import asyncio
import sys

import prodhyp


if __name__ == "__main__":
    sys.exit(asyncio.run(prodhyp.main()))
