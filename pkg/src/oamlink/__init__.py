"""Link-level simulator for OAM-multiplexed MIMO links under misalignment and turbulence."""

__version__ = "0.1.0"
