#!/usr/bin/env python3
"""
SLL - Run Script

Convenience commands for running the test suite and checking the environment.
"""

import click


@click.group()
def cli():
    """SLL development CLI"""
    pass


@cli.command()
@click.option("--slow", is_flag=True, help="Also run the slow statistical tests")
@click.option("--verbose", "-v", is_flag=True, help="Verbose output")
@click.option("-k", "keyword", default=None, help="Only run tests matching this expression")
def test(slow, verbose, keyword):
    """Run tests"""
    import subprocess
    import sys

    cmd = [sys.executable, "-m", "pytest"]

    if slow:
        cmd.extend(["-m", "slow or not slow"])

    if verbose:
        cmd.append("-v")

    if keyword:
        cmd.extend(["-k", keyword])

    click.echo(f"Running tests: {' '.join(cmd)}")
    result = subprocess.run(cmd)
    sys.exit(result.returncode)


@cli.command()
def info():
    """Show the effective settings"""
    from sll.core.config import settings

    click.echo(f"{settings.app_name} {settings.version}")
    click.echo("=" * 40)
    for key, value in settings.model_dump().items():
        click.echo(f"{key}: {value}")
    click.echo("=" * 40)


@cli.command()
def check_dependencies():
    """Check if all dependencies are installed"""
    import importlib

    required_packages = {
        "pydantic": "pydantic",
        "pydantic-settings": "pydantic_settings",
        "python-dotenv": "dotenv",
        "numpy": "numpy",
        "scipy": "scipy",
        "pandas": "pandas",
        "networkx": "networkx",
        "matplotlib": "matplotlib",
        "click": "click",
        "pytest": "pytest",
    }

    click.echo("Checking dependencies...")

    missing = []
    for package, module in required_packages.items():
        try:
            importlib.import_module(module)
            click.echo(f"ok      {package}")
        except ImportError:
            click.echo(f"missing {package}")
            missing.append(package)

    if missing:
        click.echo(f"\nMissing packages: {', '.join(missing)}")
        click.echo("Install with: pip install " + " ".join(missing))
        raise SystemExit(1)
    click.echo("\nAll dependencies are installed.")


if __name__ == "__main__":
    cli()
