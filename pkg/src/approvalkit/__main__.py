from approvalkit.cli import main

main()
