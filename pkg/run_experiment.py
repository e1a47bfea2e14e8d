import os
import sys

# 把项目根目录加入路径，直接 python run_experiment.py ... 即可运行
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    # 例：python run_experiment.py construct --body configs/bodies/square2.json --k 3 --out output/cert_k3.json
    raise SystemExit(main())
