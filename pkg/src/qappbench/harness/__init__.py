"""Suite orchestration and the command-line interface."""
from .config import ConfigError, SuiteConfig, default_suite, load_config
from .runner import (build_plan, export_circuits, run_benchmark, run_clops, run_suite, score_counts,
                     strip_timing, summary_csv, write_report)

__all__ = ["ConfigError", "SuiteConfig", "build_plan", "default_suite", "export_circuits",
           "load_config", "run_benchmark", "run_clops", "run_suite", "score_counts", "strip_timing",
           "summary_csv", "write_report"]
