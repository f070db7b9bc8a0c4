from hydrogenoid.core import verify_preset, write
report = verify_preset("attractive_three")
print(report.passed, report.failed)
write(report, "attractive_three.json")
