"""Allow running as python -m blockcalc."""
from .cli import main

if __name__ == "__main__":
    main()
