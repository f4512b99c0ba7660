"""Two-photon bound states in Rydberg-EIT media: spectra, dynamics, closed forms and scenario runner."""

__version__ = "0.1.0"


def main() -> int:
    from .cli import main as cli_main

    return cli_main()
