import os
import sys


def check_requirements():
    """Check if all required packages are installed"""
    try:
        import numpy
        import pandas
        import matplotlib

        # Test-only packages - we'll just warn if they're missing
        try:
            import pytest
            import hypothesis
        except ImportError:
            print("Warning: pytest/hypothesis not installed. The test suite will not run.", file=sys.stderr)

        return True
    except ImportError as e:
        print(f"Missing required package: {e}", file=sys.stderr)
        return False


def setup_sample_matrices():
    """Write the sample matrix documents if they don't exist"""
    if not os.path.isdir('matrices') or not os.listdir('matrices'):
        print("Writing sample matrices...", file=sys.stderr)
        try:
            from create_sample_matrices import write_sample_matrices
            write_sample_matrices('matrices')
            return True
        except Exception as e:
            print(f"Error writing sample matrices: {e}", file=sys.stderr)
            return False
    return True


if __name__ == "__main__":
    # Documents go to stdout, so every message here goes to stderr
    if not check_requirements():
        print("Install the packages with 'pip install -r requirements.txt' and try again.", file=sys.stderr)
        sys.exit(1)

    setup_sample_matrices()

    from cli import main
    sys.exit(main(sys.argv[1:]))
