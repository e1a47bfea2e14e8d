from pathlib import Path

# 项目所在根目录
PROJECT_ROOT = (Path(__file__).parent.parent).resolve()
# 配置目录 (defaults.yaml 等)
CONFIG_ROOT = (Path(__file__).parent).resolve()
# 示例凸体库 (BodyFile JSON)
BODY_LIBRARY = (Path(__file__).parent / "bodies").resolve()
# 输出目录 (证书、CSV、SVG)
OUTPUT_ROOT = (Path(__file__).parent.parent / "output").resolve()

SQUARE2_JSON = BODY_LIBRARY / "square2.json"
DISC1_JSON = BODY_LIBRARY / "disc1.json"
STADIUM_JSON = BODY_LIBRARY / "stadium.json"
TRI_EQ_JSON = BODY_LIBRARY / "tri_eq.json"
ROUNDED_TRIANGLE_JSON = BODY_LIBRARY / "rounded_triangle.json"


if __name__ == '__main__':
    print(PROJECT_ROOT)
    print(CONFIG_ROOT)
    print(BODY_LIBRARY)
    print(OUTPUT_ROOT)
