from dehazer.cli import main

main()
