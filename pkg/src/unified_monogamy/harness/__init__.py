"""CLI harness: worked-example reproduction, campaigns, state checks."""

from .campaign import CampaignConfig, ConfigError, cmd_campaign
from .figures import cmd_example1, cmd_example2

__all__ = ["CampaignConfig", "ConfigError", "cmd_campaign", "cmd_example1", "cmd_example2"]
