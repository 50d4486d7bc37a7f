import os
import unittest

# 時間のかかる統計的な受け入れテストを実行するか
ACCEPTANCE = os.environ.get("JUMPVOL_ACCEPTANCE") == "1"

acceptance = unittest.skipUnless(ACCEPTANCE, "JUMPVOL_ACCEPTANCE=1で実行する")
