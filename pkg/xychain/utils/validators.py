"""parameter validation utilities"""

import math
from typing import Optional, Tuple


class ParameterValidator:
    """validator for request and command-line parameters"""

    @staticmethod
    def validate_sites(n_sites: int, max_sites: Optional[int] = None) -> Tuple[bool, str]:
        """validate chain length

        args:
            n_sites: number of sites N
            max_sites: optional upper limit

        returns:
            tuple of (is_valid, error_message)
        """
        if isinstance(n_sites, bool) or not isinstance(n_sites, int):
            return False, "n_sites must be an integer"

        if n_sites < 3:
            return False, "n_sites must be at least 3"

        if max_sites is not None and n_sites > max_sites:
            return False, f"n_sites exceeds the limit of {max_sites}"

        return True, ""

    @staticmethod
    def validate_receiver(receiver: int, n_sites: int) -> Tuple[bool, str]:
        """validate receiver site index

        args:
            receiver: receiver site r (1-based)
            n_sites: number of sites N

        returns:
            tuple of (is_valid, error_message)
        """
        if not 1 <= receiver <= n_sites:
            return False, f"receiver site must lie in 1..{n_sites}"

        return True, ""

    @staticmethod
    def validate_exchange(jx: Optional[float], jy: Optional[float]) -> Tuple[bool, str]:
        """validate an (jx, jy) exchange pair"""
        if (jx is None) != (jy is None):
            return False, "jx and jy must be given together"

        if jx is not None and not (math.isfinite(jx) and math.isfinite(jy)):
            return False, "jx and jy must be finite"

        if jx is not None and jx + jy == 0.0:
            return False, "jx + jy must be non-zero"

        return True, ""

    @staticmethod
    def validate_grid_size(t_steps: int, gamma_steps: int, max_cells: int) -> Tuple[bool, str]:
        """validate sweep grid size

        args:
            t_steps: points along t
            gamma_steps: points along gamma
            max_cells: maximum number of grid cells

        returns:
            tuple of (is_valid, error_message)
        """
        cells = t_steps * gamma_steps
        if cells > max_cells:
            return False, f"grid of {cells} cells exceeds the limit of {max_cells}"

        return True, ""
