__all__ = ["max_workers"]

from typing import Optional

# Global mutable state
# Upper bound on worker threads for batch jobs; None runs serially
max_workers: Optional[int] = None
