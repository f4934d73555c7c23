"""charta11y: a touch-exploration engine that makes 2-D charts usable
without sight.

The engine is a deterministic event-to-feedback state machine with two
modes — screen-reader-style semantic navigation and direct touch mapping —
plus a replayable trace harness and a framed TCP endpoint for live clients.
"""

from .config import SessionConfig, build_session, config_hash, load_config
from .events import FeedbackEvent, InputEvent
from .model import (ChartModel, ChartSpec, DataPoint, DatasetError, Viewport,
                    data_to_screen, parse_dataset, screen_to_data)
from .session import EngineParams, Session
from .sonification import SonifyParams, ToneSpec
from .tree import GridConfig, SemanticTree, build_semantic_tree

__version__ = "0.1.0"

__all__ = [
    "ChartModel", "ChartSpec", "DataPoint", "DatasetError", "EngineParams",
    "FeedbackEvent", "GridConfig", "InputEvent", "SemanticTree", "Session",
    "SessionConfig", "SonifyParams", "ToneSpec", "Viewport",
    "build_semantic_tree", "build_session", "config_hash", "data_to_screen",
    "load_config", "parse_dataset", "screen_to_data",
]
