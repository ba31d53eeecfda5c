from amor.cli import main

main()
