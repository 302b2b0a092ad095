"""Error handling, logging setup and the batch processor."""
