"""几何与引理构造中使用的异常类型。"""


class InvalidBodyError(ValueError):
    """凸体不满足表示不变量 (非凸、顺时针、重复点、rho < 0 等)。"""


class NotInteriorError(ValueError):
    """给定的中心点不在凸体内部。"""


class DegenerateHullError(ValueError):
    """点集凸包退化为点或线段，没有内切圆。"""


class InvalidParameterError(ValueError):
    """构造参数非法 (n < 3, epsilon < 0, R <= 0, k < 1 ...)。"""


class CenterNotAdmissibleError(ValueError):
    """中心点不属于内切圆心集合。"""


class CertificateFormatError(ValueError):
    """证书文档缺字段或字段类型错误。"""


class BudgetExhausted(RuntimeError):
    """参数搜索在预算内没能让 k * alpha 落到 2π 以下。"""


class VerificationError(RuntimeError):
    """构造出的证书自检失败：这是内部不一致，不应出现。"""
