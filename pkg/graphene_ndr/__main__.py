import sys

from graphene_ndr.cli import main

sys.exit(main())
