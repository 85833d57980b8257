"""Experiment harness: configs, training/evaluation runs, comparison, replay and the CLI."""
