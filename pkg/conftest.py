# -*- coding: utf-8 -*-
# keeps the repository root importable when pytest runs without an installed package
