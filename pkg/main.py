"""
RecTune - Main Entry Point
Run with: python main.py auto --data ratings.tsv --preset ml100k
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import main


if __name__ == "__main__":
    main()
