"""
Row sampling for large rating files.
Draws a seeded uniform sample of rating lines without replacement.
"""

from pathlib import Path
from typing import Optional

import numpy as np
from loguru import logger

from ..errors import DatasetError


class RatingSampler:
    """Sample rating rows from a delimited file, keeping their text and order."""

    def __init__(self, seed: int, header: bool = False, encoding: str = "utf-8"):
        """
        Initialize rating sampler.

        Args:
            seed: Seed of the sampling generator
            header: Whether the first line is a header to carry over
            encoding: Text encoding of the source, reused for the output
        """
        self.seed = seed
        self.header = header
        self.encoding = encoding

    def read_rows(self, path: str | Path) -> tuple[Optional[str], list[str]]:
        """
        Split a file into its header line and its non-blank rating rows.

        Returns:
            (header or None, rows without line endings)

        Raises:
            DatasetError: The file is not valid text in the sampler's encoding
        """
        try:
            lines = Path(path).read_text(encoding=self.encoding).splitlines()
        except UnicodeDecodeError as e:
            raise DatasetError(
                f"cannot decode {path} as {self.encoding} ({e.reason} at byte {e.start})"
            ) from None
        header = None
        if self.header and lines:
            header, lines = lines[0], lines[1:]
        return header, [line for line in lines if line.strip()]

    def sample_rows(self, rows: list[str], n: int) -> list[str]:
        """
        Choose ``n`` rows uniformly without replacement.

        The chosen rows keep their original relative order.

        Raises:
            ValueError: n is negative or larger than the number of rows
        """
        if not 0 <= n <= len(rows):
            raise ValueError(f"cannot sample {n} rows from a file with {len(rows)} rows")
        rng = np.random.default_rng(self.seed)
        chosen = np.sort(rng.choice(len(rows), size=n, replace=False))
        return [rows[i] for i in chosen]

    def sample_file(self, source: str | Path, n: int, output: str | Path) -> int:
        """
        Write a sample of ``source`` to ``output`` in the same format.

        Returns:
            Number of rows written
        """
        header, rows = self.read_rows(source)
        sampled = self.sample_rows(rows, n)
        output = Path(output)
        output.parent.mkdir(parents=True, exist_ok=True)
        lines = ([header] if header is not None else []) + sampled
        output.write_text("".join(line + "\n" for line in lines), encoding=self.encoding)
        logger.info(f"Sampled {len(sampled)} of {len(rows)} rows into {output}")
        return len(sampled)
