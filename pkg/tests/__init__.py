# ═══════════════════════════════════════════════════════════════
# Exact Stump Boosting - Tests Module
# ═══════════════════════════════════════════════════════════════
"""
测试用例模块: 每个 core / experiments 模块一个测试文件，外加验收测试
"""
