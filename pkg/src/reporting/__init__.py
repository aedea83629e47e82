"""Machine-readable run output: events.jsonl and summary.csv."""

from reporting.events import EVENTS_FILE, EventWriter, config_hash
from reporting.summary import SUMMARY_FILE, SummaryWriter

__all__ = ["EVENTS_FILE", "SUMMARY_FILE", "EventWriter", "SummaryWriter", "config_hash"]
