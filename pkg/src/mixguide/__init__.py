"""mixguide: narrated-walkthrough training sessions with a juice-mixer twin."""

__version__ = "0.1.0"
