from quadpencil.cli import main

raise SystemExit(main())
