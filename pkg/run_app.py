import subprocess
import sys
from pathlib import Path


def main():
    """
    Helper script to run the engine command line from the repository root
    """
    # Get the directory of this script
    script_dir = Path(__file__).parent

    # Define path to the app.py file
    app_path = script_dir / "nekrasov-engine" / "src" / "app.py"

    if not app_path.exists():
        print(f"Error: Could not find app at {app_path}", file=sys.stderr)
        sys.exit(2)

    # Settings come from NEKRASOV_* variables; a .env file is optional
    env_path = script_dir / "nekrasov-engine" / ".env"
    if not env_path.exists():
        print(f"Note: no .env at {env_path}; using built-in defaults.", file=sys.stderr)

    cmd = [sys.executable, str(app_path), *sys.argv[1:]]

    # stdout carries the JSON report, so only the exit code is forwarded
    try:
        result = subprocess.run(cmd)
    except FileNotFoundError:
        print("Error: Python interpreter not found.", file=sys.stderr)
        sys.exit(2)
    sys.exit(result.returncode)


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\nRun stopped by user.", file=sys.stderr)
        sys.exit(130)
