from .lab_cli import main

raise SystemExit(main())
