import csv
import logging
from pathlib import Path
from typing import Callable, Dict, Iterable, List

from lommel.functions.core_complex import Eval

logger = logging.getLogger(__name__)

GRID_COLUMNS = ['re_z', 'im_z', 're_f', 'im_f', 'err']


class GridWriter:
    """
    Utility for dumping function values on a grid of points into a CSV file.
    Rows are written in batches so long grids do not sit in memory.
    """

    def __init__(self, file_path: str, batch_size: int = 100):
        """
        Initialize the grid writer.

        Args:
            file_path: Destination CSV path; its directory must exist
            batch_size: Number of rows buffered before a write
        """
        self.path = Path(file_path)
        self.batch_size = batch_size

    def write(self, points: Iterable[complex], evaluate: Callable[[complex], Eval]) -> int:
        """
        Evaluate a function at each point and write one row per point.

        Args:
            points: Grid points (the value written to re_z, im_z)
            evaluate: Function returning an Eval for a point

        Returns:
            Number of rows written

        Raises:
            FileNotFoundError: If the destination directory doesn't exist
        """
        if not self.path.parent.exists():
            raise FileNotFoundError(f"Directory not found: {self.path.parent}")

        rows_written = 0
        batch: List[Dict[str, str]] = []
        with open(self.path, 'w', encoding='utf-8', newline='') as csvfile:
            writer = csv.DictWriter(csvfile, fieldnames=GRID_COLUMNS)
            writer.writeheader()
            for point in points:
                result = evaluate(point)
                batch.append({
                    're_z': repr(point.real),
                    'im_z': repr(point.imag),
                    're_f': repr(result.value.real),
                    'im_f': repr(result.value.imag),
                    'err': repr(result.abs_err_est),
                })
                if len(batch) >= self.batch_size:
                    writer.writerows(batch)
                    rows_written += len(batch)
                    batch = []
            if batch:
                writer.writerows(batch)
                rows_written += len(batch)

        logger.info(f"Wrote {rows_written} grid rows to {self.path}")
        return rows_written


def load_grid(file_path: str) -> List[Dict[str, float]]:
    """
    Read a grid dump back as a list of float rows.

    Raises:
        FileNotFoundError: If the CSV file doesn't exist
    """
    csv_path = Path(file_path)
    if not csv_path.exists():
        raise FileNotFoundError(f"CSV file not found: {file_path}")
    with open(csv_path, 'r', encoding='utf-8') as csvfile:
        return [{key: float(value) for key, value in row.items()} for row in csv.DictReader(csvfile)]
